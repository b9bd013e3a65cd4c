#include "cinsure/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using cinsure::cli::run;

namespace {

const std::string kDir = CINSURE_SCENARIO_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("fixed formatting") {
  CHECK(cinsure::cli::fixed(1.5) == "1.500000000");
  CHECK(cinsure::cli::fixed(-1e-12) == "0.000000000");
  CHECK(cinsure::cli::fixed(-2.25) == "-2.250000000");
}

TEST_CASE("validate") {
  auto r = call({"validate", kDir + "/s1_avar25.json"});
  CHECK(r.code == cinsure::cli::kExitOk);
  CHECK(r.out.find("reservation: 60.000000000 (derived)") != std::string::npos);
  CHECK(r.out.find("kernel: FOSD-monotone") != std::string::npos);

  r = call({"validate", kDir + "/missing.json"});
  CHECK(r.code == cinsure::cli::kExitUsage);
  CHECK_FALSE(r.err.empty());

  const auto bad = std::filesystem::temp_directory_path() / "cinsure_cli_bad.json";
  std::ifstream in(kDir + "/s1_neutral.json");
  std::stringstream text;
  text << in.rdbuf();
  std::string doc = text.str();
  doc.replace(doc.find("0.8"), 3, "0.9");
  std::ofstream(bad) << doc;
  r = call({"validate", bad.string()});
  CHECK(r.code == cinsure::cli::kExitUsage);
  CHECK(r.err.find("kernel[1]") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("design exit codes and output") {
  auto r = call({"design", "--mode", "hidden", "--scenario", kDir + "/s1_avar25.json",
                 "--premium-range", "0:60:5"});
  CHECK(r.code == cinsure::cli::kExitOk);
  CHECK(r.out.find("objective      15.000000000") != std::string::npos);

  r = call({"design", "--mode", "full", "--scenario", kDir + "/s1_avar25.json",
            "--premium-range", "500:600:50"});
  CHECK(r.code == cinsure::cli::kExitInfeasible);
  CHECK(r.out.empty());
  CHECK(r.err.find("infeasible") != std::string::npos);

  CHECK(call({"design", "--mode", "sideways", "--scenario", kDir + "/s1_avar25.json"}).code ==
        cinsure::cli::kExitUsage);
  CHECK(call({"design", "--mode", "full"}).code == cinsure::cli::kExitUsage);
  CHECK(call({"design", "--mode", "full", "--scenario", kDir + "/s1_avar25.json",
              "--premium-range", "5:0:1"})
            .code == cinsure::cli::kExitUsage);
  CHECK(call({}).code == cinsure::cli::kExitUsage);
  CHECK(call({"frobnicate"}).code == cinsure::cli::kExitUsage);
}

TEST_CASE("design writes files only on success") {
  const auto dir = std::filesystem::temp_directory_path() / "cinsure_cli_out";
  std::filesystem::create_directories(dir);
  const auto ok = dir / "ok.json";
  const auto none = dir / "none.json";
  CHECK(call({"design", "--mode", "full", "--scenario", kDir + "/s1_avar25.json", "--format",
              "json", "--out", ok.string()})
            .code == 0);
  CHECK(std::filesystem::exists(ok));
  CHECK(call({"design", "--mode", "full", "--scenario", kDir + "/s1_avar25.json",
              "--premium-range", "500:600:50", "--out", none.string()})
            .code == cinsure::cli::kExitInfeasible);
  CHECK_FALSE(std::filesystem::exists(none));
  std::filesystem::remove_all(dir);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::vector<std::string>> commands{
      {"design", "--mode", "full", "--scenario", kDir + "/ransomware.json", "--format", "csv"},
      {"design", "--mode", "hidden", "--scenario", kDir + "/s1_avar50.json", "--format", "json"},
      {"design", "--mode", "pref", "--scenario", kDir + "/s1_neutral.json", "--candidates",
       "expectation@0,avar:0.5@2,avar:0.25@5"},
      {"design", "--mode", "first-order"},
      {"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "reservation", "--from", "55",
       "--to", "70", "--steps", "4"}};
  for (const auto& cmd : commands) {
    const auto a = call(cmd);
    const auto b = call(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("sweep over the AV@R level") {
  auto r = call({"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "avar-alpha",
                 "--from", "0.25", "--to", "1", "--steps", "4", "--premium-range", "0:60:5"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        "param,objective_full,objective_hidden,x_full,x_hidden,intensity_action,intensity_profit");
  CHECK(cells(rows[1])[2] == "15.000000000");
  CHECK(std::stod(cells(rows[4])[0]) == 1.0);
  CHECK(std::stod(cells(rows[4])[2]) <= 1e-9);

  r = call({"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "avar-alpha", "--from",
            "1.0", "--to", "0.25", "--steps", "4", "--premium-range", "0:60:5"});
  REQUIRE(r.code == 0);
  REQUIRE(lines(r.out).size() == 5);
  CHECK(std::stod(cells(lines(r.out)[1])[0]) == 1.0);
  CHECK(std::stod(cells(lines(r.out)[1])[2]) <= 1e-9);

  r = call({"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "avar-alpha", "--from",
            "0.5", "--to", "0.5", "--steps", "1"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 2);

  r = call({"sweep", "--scenario", kDir + "/s1_neutral.json", "--param", "avar-alpha", "--from",
            "0.25", "--to", "1", "--steps", "4"});
  CHECK(r.code == cinsure::cli::kExitUsage);

  CHECK(call({"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "avar-alpha", "--from",
              "0.25", "--to", "1", "--steps", "0"})
            .code == cinsure::cli::kExitUsage);
}

TEST_CASE("sweep infeasibility") {
  auto r = call({"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "premium", "--from",
                 "40", "--to", "500", "--steps", "3"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(cells(rows[3])[1].empty());

  r = call({"sweep", "--scenario", kDir + "/s1_avar25.json", "--param", "premium", "--from",
            "400", "--to", "500", "--steps", "2"});
  CHECK(r.code == cinsure::cli::kExitInfeasible);
  CHECK(r.out.empty());
}
