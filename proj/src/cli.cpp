#include "cinsure/cli.hpp"

#include "cinsure/scenarios.hpp"
#include "cinsure/solvers.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace cinsure::cli {

std::string fixed(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { table, json, csv };

struct Range {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

Range parse_range(const std::string& text, const char* what) {
  Range r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.lo, &r.hi, &r.step, &tail) != 3)
    throw UsageError(std::string(what) + " must be lo:hi:step, got '" + text + "'");
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.step > 0.0) || r.hi < r.lo)
    throw UsageError(std::string(what) + " is empty or has a non-positive step");
  return r;
}

/// Shared options for design and sweep.
struct RunConfig {
  std::string mode = "hidden";
  std::string scenario;
  std::string premium_range;
  std::string coverage_range = "0:1:0.25";
  std::string tie_break = "insurer";
  std::string format = "table";
  std::string out;
  std::string candidates;
  // smooth family for first-order mode
  double family_loss = 100.0, family_p0 = 0.5, family_decay = 1.0, family_unit_cost = 10.0;
  std::string family_interval = "0:5";
};

TieBreak parse_tie(const std::string& t) {
  if (t == "low") return TieBreak::lowest;
  if (t == "insurer") return TieBreak::insurer_optimal;
  if (t == "pessimistic") return TieBreak::pessimistic;
  throw UsageError("--tie-break must be low, insurer or pessimistic");
}

Format parse_format(const std::string& f) {
  if (f == "table") return Format::table;
  if (f == "json") return Format::json;
  if (f == "csv") return Format::csv;
  throw UsageError("--format must be table, json or csv");
}

std::string normalize_mode(std::string m) {
  if (m.rfind("design-", 0) == 0) m = m.substr(7);
  if (m != "full" && m != "hidden" && m != "first-order" && m != "pref")
    throw UsageError("--mode must be full, hidden, first-order or pref");
  return m;
}

Scenario load(const std::string& path) {
  if (path.empty()) throw UsageError("--scenario is required");
  return load_scenario(path);
}

ContractGrid make_grid(const RunConfig& cfg, const Scenario* s) {
  std::string premium = cfg.premium_range;
  if (premium.empty()) {
    const double top = s ? s->space().max_loss() : 100.0;
    premium = "0:" + fixed(top) + ":" + fixed(top > 0 ? top / 20.0 : 1.0);
  }
  const Range p = parse_range(premium, "--premium-range");
  const Range c = parse_range(cfg.coverage_range, "--coverage-range");
  if (p.lo < 0.0) throw UsageError("--premium-range must be non-negative");
  if (c.lo < 0.0 || c.hi > 1.0) throw UsageError("--coverage-range must lie in [0, 1]");
  return ContractGrid::linear(inclusive_range(p.lo, p.hi, p.step),
                              inclusive_range(c.lo, c.hi, c.step));
}

// Ordered key/value report rendered as table, JSON object or one CSV row.
class Record {
 public:
  void text(const std::string& k, const std::string& v) { items_.push_back({k, v, true}); }
  void number(const std::string& k, double v) { items_.push_back({k, fixed(v), false}); }
  void integer(const std::string& k, long long v) { items_.push_back({k, std::to_string(v), false}); }
  void flag(const std::string& k, bool v) { items_.push_back({k, v ? "true" : "false", false}); }
  void raw(const std::string& k, const std::string& v) { items_.push_back({k, v, false}); }

  std::string table() const {
    std::size_t w = 0;
    for (const auto& i : items_) w = std::max(w, i.key.size());
    std::string s;
    for (const auto& i : items_) s += i.key + std::string(w - i.key.size() + 2, ' ') + i.value + "\n";
    return s;
  }
  std::string json(int indent = 0) const {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    std::string s = "{\n";
    for (std::size_t k = 0; k < items_.size(); ++k) {
      const auto& i = items_[k];
      s += pad + quote(i.key) + ": " + (i.quoted ? quote(i.value) : i.value);
      s += k + 1 < items_.size() ? ",\n" : "\n";
    }
    return s + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  }
  std::string csv_header() const {
    std::string s;
    for (const auto& i : items_) s += (s.empty() ? "" : ",") + i.key;
    return s + "\n";
  }
  std::string csv_row() const {
    std::string s;
    bool first = true;
    for (const auto& i : items_) {
      if (!first) s += ",";
      first = false;
      s += i.value.find_first_of(",\"") == std::string::npos ? i.value : quote(i.value);
    }
    return s + "\n";
  }

  static std::string quote(const std::string& v) {
    std::string s = "\"";
    for (char c : v) {
      if (c == '"' || c == '\\') s += '\\';
      s += c;
    }
    return s + "\"";
  }

 private:
  struct Item {
    std::string key, value;
    bool quoted;
  };
  std::vector<Item> items_;
};

std::string vector_text(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fixed(v[i]);
  return s + "]";
}

Record result_record(const std::string& name, const std::string& mode, const DesignResult& r) {
  Record rec;
  rec.text("scenario", name);
  rec.text("mode", mode);
  rec.text("status", "solved");
  rec.number("premium", r.contract.premium);
  if (r.linear) rec.number("coverage", r.linear->coverage);
  rec.raw("indemnity", vector_text(r.contract.indemnity));
  if (r.action) rec.integer("action_index", static_cast<long long>(*r.action));
  rec.number("action_level", r.action_level);
  rec.number("objective", r.objective);
  rec.number("user_cost", r.user_cost);
  rec.number("reservation", r.reservation);
  rec.flag("ir_binding", r.ir_binding);
  rec.flag("ic_satisfied", r.ic_satisfied);
  rec.flag("market_viable", r.market_viable());
  if (r.intensity) {
    rec.number("intensity_action", r.intensity->action_gap);
    rec.number("intensity_profit", r.intensity->profit_gap);
  }
  if (!r.fingerprint.empty()) rec.text("fingerprint", r.fingerprint);
  return rec;
}

std::string render(const Record& rec, Format f) {
  switch (f) {
    case Format::table:
      return rec.table();
    case Format::json:
      return rec.json() + "\n";
    case Format::csv:
      return rec.csv_header() + rec.csv_row();
  }
  return {};
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write " + cfg.out);
  f << text;
}

std::optional<std::pair<double, double>> parse_interval(const std::string& text) {
  double a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf%c", &a, &b, &tail) != 2 || !(a < b)) return std::nullopt;
  return std::pair{a, b};
}

RiskFunctional parse_functional(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  double param = 0.0;
  if (colon != std::string::npos) {
    char* end = nullptr;
    param = std::strtod(text.c_str() + colon + 1, &end);
    if (*end != '\0') throw UsageError("bad candidate parameter in '" + text + "'");
  }
  try {
    if (kind == "expectation") return Expectation{};
    if (kind == "avar") {
      require_alpha(param);
      return AVaR{param};
    }
    if (kind == "exponential") return ExpectedDisutility{UtilityCurve::exponential(param)};
    if (kind == "distortion-power") return Distortion{DistortionFunction::power(param)};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown candidate functional '" + kind + "'");
}

// "expectation@0,avar:0.5@2": functional@shaping-cost, comma separated.
PreferenceDesignSpace parse_candidates(const std::string& text, const Scenario& s) {
  PreferenceDesignSpace space;
  if (text.empty()) {
    space.candidates.push_back({describe(s.agent.risk), s.agent.risk, 0.0, true});
    return space;
  }
  std::stringstream in(text);
  std::string item;
  bool have_status_quo = false;
  while (std::getline(in, item, ',')) {
    const auto at = item.find('@');
    const std::string fn = item.substr(0, at);
    double cost = 0.0;
    if (at != std::string::npos) {
      char* end = nullptr;
      cost = std::strtod(item.c_str() + at + 1, &end);
      if (*end != '\0') throw UsageError("bad shaping cost in '" + item + "'");
    }
    PreferenceCandidate c{fn, parse_functional(fn), cost, false};
    if (!have_status_quo && cost == 0.0 && c.risk == s.agent.risk) c.status_quo = have_status_quo = true;
    space.candidates.push_back(std::move(c));
  }
  const auto report = space.validate();
  if (!report.ok()) throw UsageError(report.str());
  return space;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(path);
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto ubar = reservation(s);
  out << "scenario: " << s.name << "\n";
  out << "outcomes: " << s.space().size() << "\n";
  out << "actions: " << s.actions().size() << "\n";
  out << "agent: " << describe(s.agent.risk) << "\n";
  out << "reservation: " << fixed(ubar.value) << (ubar.derived ? " (derived)" : " (override)")
      << "\n";
  const auto mono = check_kernel_monotone(s.kernel);
  if (mono.ok())
    out << "kernel: FOSD-monotone\n";
  else
    out << "warning: kernel not FOSD-monotone: " << mono.str() << "\n";
  return kExitOk;
}

int design_first_order(const RunConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
  const auto interval = parse_interval(cfg.family_interval);
  if (!interval) throw UsageError("--family-interval must be lo:hi with lo < hi");
  auto family = SmoothFamily::exponential_breach(cfg.family_loss, cfg.family_p0, cfg.family_decay,
                                                 cfg.family_unit_cost, interval->first,
                                                 interval->second);
  std::string name = "smooth-family";
  if (!cfg.scenario.empty()) {
    const Scenario s = load(cfg.scenario);
    family.agent = s.agent.risk;
    family.insurer = s.insurer;
    family.reservation = s.agent.reservation;
    name = s.name;
  }
  RunConfig grid_cfg = cfg;
  if (grid_cfg.premium_range.empty())
    grid_cfg.premium_range = "0:" + fixed(cfg.family_loss) + ":" + fixed(cfg.family_loss / 20.0);
  const auto grid = make_grid(grid_cfg, nullptr);
  std::optional<DesignResult> r;
  try {
    r = solve_first_order(family, grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  if (!r) {
    err << "infeasible: no contract satisfies individual rationality\n";
    return kExitInfeasible;
  }
  emit(render(result_record(name, "first-order", *r), fmt), cfg, out);
  return kExitOk;
}

int design_pref(const RunConfig& cfg, const Scenario& s, const ContractGrid& grid,
                const SolverOptions& opts, Format fmt, std::ostream& out, std::ostream& err) {
  const auto space = parse_candidates(cfg.candidates, s);
  const auto report = solve_preference_design(s, grid, space, opts);
  if (!report.best) {
    err << "infeasible: no candidate admits an IR-feasible contract\n";
    return kExitInfeasible;
  }
  std::vector<Record> rows;
  for (const auto& row : report.rows) {
    Record rec;
    rec.text("candidate", row.candidate.label);
    rec.number("shaping_cost", row.candidate.shaping_cost);
    rec.flag("status_quo", row.candidate.status_quo);
    rec.raw("objective_hidden", row.second_best ? fixed(row.second_best->objective) : "");
    rec.raw("objective_full", row.first_best ? fixed(row.first_best->objective) : "");
    const auto* mh = row.first_best && row.first_best->intensity ? &*row.first_best->intensity
                                                                  : nullptr;
    rec.raw("intensity_action", mh ? fixed(mh->action_gap) : "");
    rec.raw("intensity_profit", mh ? fixed(mh->profit_gap) : "");
    rec.raw("net_value", row.net_value ? fixed(*row.net_value) : "");
    rec.flag("market_viable", row.second_best && row.second_best->market_viable());
    rows.push_back(std::move(rec));
  }
  const auto& win = report.rows[*report.best];
  std::string text;
  switch (fmt) {
    case Format::csv:
      text = rows.front().csv_header();
      for (const auto& r : rows) text += r.csv_row();
      break;
    case Format::json: {
      text = "{\n  \"scenario\": " + Record::quote(s.name) + ",\n  \"mode\": \"pref\",\n";
      text += "  \"best\": " + Record::quote(win.candidate.label) + ",\n  \"candidates\": [\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        text += "    " + rows[i].json(4) + (i + 1 < rows.size() ? ",\n" : "\n");
      text += "  ],\n  \"result\": " + result_record(s.name, "pref", *win.second_best).json(2) +
              "\n}\n";
      break;
    }
    case Format::table:
      for (const auto& r : rows) text += r.table() + "\n";
      text += "best: " + win.candidate.label + "\n";
      text += result_record(s.name, "pref", *win.second_best).table();
      break;
  }
  emit(text, cfg, out);
  return kExitOk;
}

int cmd_design(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string mode = normalize_mode(cfg.mode);
  const Format fmt = parse_format(cfg.format);
  const SolverOptions opts{parse_tie(cfg.tie_break)};
  if (mode == "first-order") return design_first_order(cfg, fmt, out, err);

  const Scenario s = load(cfg.scenario);
  const auto grid = make_grid(cfg, &s);
  if (mode == "pref") return design_pref(cfg, s, grid, opts, fmt, out, err);

  const auto r = mode == "full" ? solve_full_info(s, grid, opts) : solve_hidden_info(s, grid, opts);
  if (!r) {
    err << "infeasible: no contract satisfies individual rationality\n";
    return kExitInfeasible;
  }
  emit(render(result_record(s.name, mode, *r), fmt), cfg, out);
  return kExitOk;
}

struct SweepConfig {
  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 0;
};

int cmd_sweep(const RunConfig& cfg, const SweepConfig& sw, std::ostream& out, std::ostream& err) {
  const SolverOptions opts{parse_tie(cfg.tie_break)};
  const Scenario base = load(cfg.scenario);
  const auto base_grid = make_grid(cfg, &base);
  if (sw.steps < 1) throw UsageError("--steps must be at least 1");
  if (sw.param == "avar-alpha") {
    if (!std::holds_alternative<AVaR>(base.agent.risk))
      throw UsageError("parameter avar-alpha needs an avar agent, scenario has " +
                       describe(base.agent.risk));
  } else if (sw.param != "reservation" && sw.param != "premium" && sw.param != "coverage") {
    throw UsageError("--param must be avar-alpha, reservation, premium or coverage");
  }

  std::string text = "param,objective_full,objective_hidden,x_full,x_hidden,intensity_action,"
                     "intensity_profit\n";
  bool any = false;
  for (int k = 0; k < sw.steps; ++k) {
    const double v = sw.steps == 1 ? sw.from : sw.from + (sw.to - sw.from) * k / (sw.steps - 1);
    Scenario s = base;
    ContractGrid grid = base_grid;
    try {
      if (sw.param == "avar-alpha") {
        require_alpha(v);
        s.agent.risk = AVaR{v};
      } else if (sw.param == "reservation") {
        s.agent.reservation = v;
      } else if (sw.param == "premium") {
        grid.premiums = {v};
      } else {
        grid.coverages = {v};
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto full = solve_full_info(s, grid, opts);
    const auto hidden = solve_hidden_info(s, grid, opts);
    any = any || full || hidden;
    text += fixed(v) + ",";
    text += (full ? fixed(full->objective) : "") + ",";
    text += (hidden ? fixed(hidden->objective) : "") + ",";
    text += (full ? fixed(full->action_level) : "") + ",";
    text += (hidden ? fixed(hidden->action_level) : "") + ",";
    text += (full ? fixed(full->intensity->action_gap) : "") + ",";
    text += (full ? fixed(full->intensity->profit_gap) : "") + "\n";
  }
  if (!any) {
    err << "infeasible: no sweep point admits an IR-feasible contract\n";
    return kExitInfeasible;
  }
  emit(text, cfg, out);
  return kExitOk;
}

void add_design_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scenario", cfg.scenario, "Scenario file (JSON)");
  cmd->add_option("--premium-range", cfg.premium_range, "Premium grid lo:hi:step");
  cmd->add_option("--coverage-range", cfg.coverage_range, "Coverage grid lo:hi:step");
  cmd->add_option("--tie-break", cfg.tie_break, "Agent tie-break: low|insurer|pessimistic");
  cmd->add_option("--out", cfg.out, "Write the report to this file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyber-insurance contract design over finite scenario models", "cinsure"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
  validate_cmd->add_option("file", validate_path, "Scenario file")->required();

  RunConfig design_cfg;
  auto* design_cmd = app.add_subcommand("design", "Solve a contract design problem");
  design_cmd->add_option("--mode", design_cfg.mode, "full|hidden|first-order|pref");
  add_design_options(design_cmd, design_cfg);
  design_cmd->add_option("--format", design_cfg.format, "table|json|csv");
  design_cmd->add_option("--candidates", design_cfg.candidates,
                         "Preference candidates, e.g. expectation@0,avar:0.5@2");
  design_cmd->add_option("--family-loss", design_cfg.family_loss, "First-order family: loss");
  design_cmd->add_option("--family-p0", design_cfg.family_p0, "First-order family: p(0)");
  design_cmd->add_option("--family-decay", design_cfg.family_decay,
                         "First-order family: breach decay rate");
  design_cmd->add_option("--family-unit-cost", design_cfg.family_unit_cost,
                         "First-order family: investment cost per unit");
  design_cmd->add_option("--family-interval", design_cfg.family_interval,
                         "First-order family: investment interval lo:hi");

  RunConfig sweep_cfg;
  SweepConfig sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter and emit CSV");
  add_design_options(sweep_cmd, sweep_cfg);
  sweep_cmd->add_option("--param", sweep.param, "avar-alpha|reservation|premium|coverage")
      ->required();
  sweep_cmd->add_option("--from", sweep.from)->required();
  sweep_cmd->add_option("--to", sweep.to)->required();
  sweep_cmd->add_option("--steps", sweep.steps)->required();

  std::vector<std::string> argv_store{"cinsure"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(validate_path, out, err);
    if (*design_cmd) return cmd_design(design_cfg, out, err);
    return cmd_sweep(sweep_cfg, sweep, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace cinsure::cli
