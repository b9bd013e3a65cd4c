#include "fixtures.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace cinsure;
using cinsure::testing::s1;

namespace {

const char* kS1 = R"({
  "name": "S1",
  "outcomes": [{"label": "no_breach", "loss": 0}, {"label": "breach", "loss": 100}],
  "actions": [{"level": 0, "cost": 0}, {"level": 1, "cost": 10}, {"level": 2, "cost": 20}],
  "kernel": [[0.5, 0.5], [0.8, 0.2], [0.9, 0.1]],
  "agent": {"risk": {"kind": "avar", "params": {"alpha": 0.25}}},
  "insurer": {"utility": {"kind": "linear"}}
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

ScenarioError parse_error(const std::string& text) {
  try {
    from_json(text);
  } catch (const ScenarioError& e) {
    return e;
  }
  FAIL("expected a ScenarioError");
  return ScenarioError("", "");
}

}  // namespace

TEST_CASE("two-point preset") {
  const auto s = s1();
  CHECK(s.space().size() == 2);
  CHECK(s.space()[1].label == "breach");
  CHECK(s.actions().size() == 3);
  CHECK(s.kernel.table()(1, 1) == doctest::Approx(0.2));
  CHECK(check_kernel_monotone(s.kernel).ok());
  CHECK_THROWS_AS(preset_two_point(100, {0.5, 0.2}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(preset_two_point(100, {1.5}, {0}), std::invalid_argument);
}

TEST_CASE("ransomware preset") {
  const auto s = preset_ransomware(2, {0.5, 0.3}, 10.0, {0, 4});
  CHECK(s.space().size() == 3);
  CHECK(s.space()[2].label == "k=2");
  CHECK(s.space()[2].loss == doctest::Approx(20.0));
  CHECK(s.kernel.table()(0, 0) == doctest::Approx(0.25));
  CHECK(s.kernel.table()(0, 1) == doctest::Approx(0.5));
  CHECK(s.kernel.table()(0, 2) == doctest::Approx(0.25));
  CHECK(s.kernel.table()(1, 0) == doctest::Approx(0.49));

  for (int n = 1; n <= 64; ++n) {
    const auto r = preset_ransomware(n, {0.6, 0.35, 0.2, 0.05}, 1.0, {0, 1, 2, 3});
    CHECK(check_kernel_monotone(r.kernel).ok());
    for (std::size_t x = 0; x < 4; ++x) CHECK(std::abs(r.kernel.table().row(Eigen::Index(x)).sum() - 1.0) <= kProbTol);
  }
  CHECK_FALSE(check_kernel_monotone(preset_ransomware(5, {0.2, 0.4}, 1.0, {0, 1}).kernel).ok());
  CHECK_THROWS_AS(preset_ransomware(65, {0.5}, 1.0, {0}), std::invalid_argument);
  CHECK_THROWS_AS(preset_ransomware(0, {0.5}, 1.0, {0}), std::invalid_argument);
}

TEST_CASE("Stackelberg attacker response") {
  StackelbergSpec spec;
  spec.effort_costs = {0.0, 10.0};
  spec.gain = 100.0;
  spec.breach.resize(2, 2);
  spec.breach << 0.3, 0.6, 0.1, 0.2;
  const ActionGrid actions({{0, 0}, {1, 5}});

  const auto k = stackelberg_kernel(spec, 50.0, actions);
  // x = 0: 30 vs 60 - 10 = 50 -> a* = 1. x = 1: 10 vs 20 - 10 = 10 -> tie, lowest effort.
  CHECK(k.attacker_response == std::vector<std::size_t>{1, 0});
  CHECK(k.kernel.table()(0, 1) == doctest::Approx(0.6));
  CHECK(k.kernel.table()(1, 1) == doctest::Approx(0.1));

  spec.gain = 0.0;
  CHECK(stackelberg_kernel(spec, 50.0, actions).attacker_response ==
        std::vector<std::size_t>{0, 0});

  spec.breach.resize(1, 2);
  CHECK_THROWS_AS(stackelberg_kernel(spec, 50.0, actions), std::invalid_argument);
}

TEST_CASE("JSON round trip") {
  std::vector<Scenario> cases{s1(), s1(AVaR{0.25}),
                              preset_ransomware(4, {0.4, 0.1}, 25.0, {0, 3},
                                                Distortion{DistortionFunction::power(0.5)})};
  auto custom = s1(ExpectedDisutility{UtilityCurve::tabulated({{-10, -12}, {0, 0}, {200, 260}})});
  custom.agent.reservation = 41.5;
  custom.insurer.utility = UtilityCurve::exponential(0.01);
  cases.push_back(custom);
  cases.push_back(s1(Distortion{DistortionFunction::tabulated({{0, 0}, {0.3, 0.6}, {1, 1}})}));
  cases.push_back(s1(ExpectedDisutility{UtilityCurve::power(1.5)}));

  for (const auto& s : cases) {
    const auto text = to_json(s);
    const auto back = from_json(text);
    CHECK(back.name == s.name);
    CHECK(back.kernel == s.kernel);
    CHECK(back.agent.risk == s.agent.risk);
    CHECK(back.agent.reservation == s.agent.reservation);
    CHECK(back.insurer.utility == s.insurer.utility);
    CHECK(fingerprint(back) == fingerprint(s));
    CHECK(to_json(back) == text);
  }

  const auto dir = std::filesystem::temp_directory_path() / "cinsure_test_scenarios";
  std::filesystem::create_directories(dir);
  save_scenario(custom, dir / "custom.json");
  CHECK(fingerprint(load_scenario(dir / "custom.json")) == fingerprint(custom));
  std::filesystem::remove_all(dir);
}

TEST_CASE("parsed S1 matches the preset") {
  const auto s = from_json(kS1);
  CHECK(s.kernel == s1().kernel);
  CHECK(s.agent.risk == RiskFunctional{AVaR{0.25}});
  CHECK_FALSE(s.agent.reservation);
  CHECK(reservation(s).derived);
  CHECK(reservation(s).value == doctest::Approx(60.0));
}

TEST_CASE("rejected scenario files name the field") {
  auto e = parse_error(replace(kS1, "[0.8, 0.2]", "[0.9, 0.2]"));
  CHECK(e.field() == "kernel[1]");
  CHECK(std::string(e.what()).find("sum = 1.1") != std::string::npos);

  e = parse_error(replace(kS1, "\"name\": \"S1\",", "\"name\": \"S1\", \"colour\": 3,"));
  CHECK(e.field() == "colour");
  CHECK(std::string(e.what()).find("unknown field") != std::string::npos);

  e = parse_error(replace(kS1, "\"alpha\": 0.25", "\"alpha\": 0.25, \"beta\": 1"));
  CHECK(e.field() == "agent.risk.params.beta");

  e = parse_error(replace(kS1, "\"alpha\": 0.25", "\"alpha\": 0"));
  CHECK(e.field() == "agent.risk");

  e = parse_error(replace(kS1, "\"kind\": \"avar\"", "\"kind\": \"mystery\""));
  CHECK(e.field() == "agent.risk.kind");

  e = parse_error(replace(kS1, "\"loss\": 100", "\"loss\": -100"));
  CHECK(e.field() == "outcomes");

  e = parse_error(replace(kS1, "\"cost\": 20", "\"cost\": 5"));
  CHECK(e.field() == "actions");

  e = parse_error(replace(kS1, "[0.9, 0.1]]", "[0.9, 0.1], [1, 0]]"));
  CHECK(e.field() == "kernel");

  e = parse_error(replace(kS1, "\"loss\": 0}", "\"loss\": \"zero\"}"));
  CHECK(e.field() == "outcomes[0].loss");

  e = parse_error(replace(kS1, "\"insurer\": {\"utility\": {\"kind\": \"linear\"}}", "\"insurer\": {}"));
  CHECK(e.field() == "insurer.utility");
  CHECK(std::string(e.what()).find("missing field") != std::string::npos);

  e = parse_error("{\n  \"name\": \"x\",\n  oops\n}");
  CHECK(std::string(e.what()).find("line 3") != std::string::npos);

  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioError);
}
