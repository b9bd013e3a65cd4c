#include "cinsure/scenarios.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace cinsure {

using json = nlohmann::ordered_json;

namespace {

ActionGrid index_actions(const std::vector<double>& costs) {
  std::vector<ActionLevel> levels;
  for (std::size_t i = 0; i < costs.size(); ++i)
    levels.push_back({static_cast<double>(i), costs[i]});
  return ActionGrid(std::move(levels));
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Scenario preset_two_point(double loss, const std::vector<double>& breach,
                          const std::vector<double>& costs, RiskFunctional agent, std::string name) {
  if (breach.size() != costs.size())
    throw std::invalid_argument("breach probabilities and costs must be aligned");
  OutcomeSpace space({{"no_breach", 0.0}, {"breach", loss}});
  Matrix table(static_cast<Eigen::Index>(breach.size()), 2);
  for (std::size_t x = 0; x < breach.size(); ++x) {
    check_probability(breach[x], "breach probability");
    table.row(static_cast<Eigen::Index>(x)) << 1.0 - breach[x], breach[x];
  }
  Scenario s{std::move(name), RiskKernel(std::move(space), index_actions(costs), std::move(table)),
             {std::move(agent), std::nullopt}, {}};
  validate_scenario(s);
  return s;
}

Scenario preset_ransomware(int units, const std::vector<double>& infection, double ransom,
                           const std::vector<double>& costs, RiskFunctional agent,
                           std::string name) {
  if (units < 1 || units > 64) throw std::invalid_argument("unit count must lie in [1, 64]");
  if (!(ransom > 0.0) || !std::isfinite(ransom))
    throw std::invalid_argument("ransom per unit must be positive");
  if (infection.size() != costs.size())
    throw std::invalid_argument("infection probabilities and costs must be aligned");

  const auto n = static_cast<Eigen::Index>(units);
  std::vector<Outcome> outcomes;
  Vector binom(n + 1);
  binom[0] = 1.0;
  for (Eigen::Index k = 0; k <= n; ++k) {
    if (k > 0) binom[k] = binom[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k);
    outcomes.push_back({"k=" + std::to_string(k), ransom * static_cast<double>(k)});
  }
  Matrix table(static_cast<Eigen::Index>(infection.size()), n + 1);
  for (std::size_t x = 0; x < infection.size(); ++x) {
    const double q = infection[x];
    check_probability(q, "infection probability");
    for (Eigen::Index k = 0; k <= n; ++k)
      table(static_cast<Eigen::Index>(x), k) =
          binom[k] * std::pow(q, static_cast<double>(k)) * std::pow(1.0 - q, static_cast<double>(n - k));
  }
  Scenario s{std::move(name),
             RiskKernel(OutcomeSpace(std::move(outcomes)), index_actions(costs), std::move(table)),
             {std::move(agent), std::nullopt}, {}};
  validate_scenario(s);
  return s;
}

StackelbergKernel stackelberg_kernel(const StackelbergSpec& spec, double loss,
                                     const ActionGrid& actions) {
  const auto efforts = static_cast<Eigen::Index>(spec.effort_costs.size());
  if (efforts == 0) throw std::invalid_argument("attacker needs at least one effort level");
  if (spec.breach.rows() != static_cast<Eigen::Index>(actions.size()) ||
      spec.breach.cols() != efforts)
    throw std::invalid_argument("breach table must be actions x efforts");
  if (!(spec.gain >= 0.0) || !std::isfinite(spec.gain))
    throw std::invalid_argument("attacker gain must be finite and non-negative");
  for (double c : spec.effort_costs)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("effort costs must be finite and non-negative");
  for (Eigen::Index i = 0; i < spec.breach.size(); ++i)
    check_probability(spec.breach.data()[i], "breach probability");

  StackelbergKernel out;
  Matrix table(spec.breach.rows(), 2);
  for (Eigen::Index x = 0; x < spec.breach.rows(); ++x) {
    Vector payoff(efforts);
    for (Eigen::Index a = 0; a < efforts; ++a)
      payoff[a] = spec.gain * spec.breach(x, a) - spec.effort_costs[static_cast<std::size_t>(a)];
    const double top = payoff.maxCoeff();
    Eigen::Index pick = 0;
    while (payoff[pick] < top - kCostTol) ++pick;
    out.attacker_response.push_back(static_cast<std::size_t>(pick));
    table(x, 0) = 1.0 - spec.breach(x, pick);
    table(x, 1) = spec.breach(x, pick);
  }
  out.kernel = RiskKernel(OutcomeSpace({{"no_breach", 0.0}, {"breach", loss}}), actions,
                          std::move(table));
  return out;
}

// ---------------------------------------------------------------------------
// JSON persistence

namespace {

json curve_json(const UtilityCurve& u) {
  json params = json::object();
  switch (u.kind()) {
    case UtilityCurve::Kind::linear:
      return {{"kind", "linear"}, {"params", params}};
    case UtilityCurve::Kind::exponential:
      params["gamma"] = u.parameter();
      return {{"kind", "exponential"}, {"params", params}};
    case UtilityCurve::Kind::power:
      params["eta"] = u.parameter();
      return {{"kind", "power"}, {"params", params}};
    case UtilityCurve::Kind::tabulated:
      params["knots"] = u.knots();
      return {{"kind", "tabulated"}, {"params", params}};
  }
  return {};
}

json distortion_json(const DistortionFunction& g) {
  json params = json::object();
  switch (g.kind()) {
    case DistortionFunction::Kind::identity:
      return {{"kind", "identity"}, {"params", params}};
    case DistortionFunction::Kind::power:
      params["beta"] = g.parameter();
      return {{"kind", "power"}, {"params", params}};
    case DistortionFunction::Kind::tabulated:
      params["knots"] = g.knots();
      return {{"kind", "tabulated"}, {"params", params}};
  }
  return {};
}

json risk_json(const RiskFunctional& f) {
  struct {
    json operator()(const Expectation&) const {
      return {{"kind", "expectation"}, {"params", json::object()}};
    }
    json operator()(const ExpectedDisutility& e) const {
      return {{"kind", "expected_disutility"}, {"params", {{"curve", curve_json(e.curve)}}}};
    }
    json operator()(const AVaR& a) const {
      return {{"kind", "avar"}, {"params", {{"alpha", a.alpha}}}};
    }
    json operator()(const Distortion& d) const {
      return {{"kind", "distortion"}, {"params", {{"g", distortion_json(d.g)}}}};
    }
  } visitor;
  return std::visit(visitor, f);
}

// Field access with path-qualified diagnostics.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

  void allow(std::initializer_list<const char*> keys) const {
    if (!node_.is_object()) fail("expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (!ok.count(it.key())) throw ScenarioError(child(it.key()), "unknown field");
  }

  bool has(const char* key) const { return node_.contains(key); }

  Reader at(const char* key) const {
    if (!node_.contains(key)) throw ScenarioError(child(key), "missing field");
    return {node_.at(key), child(key)};
  }

  Reader at(std::size_t i) const { return {node_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }

  std::string text() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  Knots knots() const {
    Knots out;
    for (std::size_t i = 0; i < size(); ++i) {
      const Reader k = at(i);
      if (k.size() != 2) k.fail("knot must be a [x, y] pair");
      out.emplace_back(k.at(std::size_t{0}).number(), k.at(std::size_t{1}).number());
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(path_, msg); }

 private:
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& node_;
  std::string path_;
};

// Runs a constructor that validates by throwing std::invalid_argument, re-tagging the error
// with the field it came from.
template <typename F>
auto tagged(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(field, e.what());
  }
}

UtilityCurve read_curve(const Reader& r) {
  r.allow({"kind", "params"});
  const std::string kind = r.at("kind").text();
  static const json empty = json::object();
  const Reader params = r.has("params") ? r.at("params") : Reader(empty, r.path());
  return tagged(r.path(), [&]() -> UtilityCurve {
    if (kind == "linear") {
      params.allow({});
      return UtilityCurve::linear();
    }
    if (kind == "exponential") {
      params.allow({"gamma"});
      return UtilityCurve::exponential(params.at("gamma").number());
    }
    if (kind == "power") {
      params.allow({"eta"});
      return UtilityCurve::power(params.at("eta").number());
    }
    if (kind == "tabulated") {
      params.allow({"knots"});
      return UtilityCurve::tabulated(params.at("knots").knots());
    }
    throw ScenarioError(r.path() + ".kind", "unknown utility kind '" + kind + "'");
  });
}

DistortionFunction read_distortion(const Reader& r) {
  r.allow({"kind", "params"});
  const std::string kind = r.at("kind").text();
  static const json empty = json::object();
  const Reader params = r.has("params") ? r.at("params") : Reader(empty, r.path());
  return tagged(r.path(), [&]() -> DistortionFunction {
    if (kind == "identity") {
      params.allow({});
      return DistortionFunction::identity();
    }
    if (kind == "power") {
      params.allow({"beta"});
      return DistortionFunction::power(params.at("beta").number());
    }
    if (kind == "tabulated") {
      params.allow({"knots"});
      return DistortionFunction::tabulated(params.at("knots").knots());
    }
    throw ScenarioError(r.path() + ".kind", "unknown distortion kind '" + kind + "'");
  });
}

RiskFunctional read_risk(const Reader& r) {
  r.allow({"kind", "params"});
  const std::string kind = r.at("kind").text();
  static const json empty = json::object();
  const Reader params = r.has("params") ? r.at("params") : Reader(empty, r.path());
  RiskFunctional f;
  if (kind == "expectation") {
    params.allow({});
    f = Expectation{};
  } else if (kind == "expected_disutility") {
    params.allow({"curve"});
    f = ExpectedDisutility{read_curve(params.at("curve"))};
  } else if (kind == "avar") {
    params.allow({"alpha"});
    f = AVaR{params.at("alpha").number()};
  } else if (kind == "distortion") {
    params.allow({"g"});
    f = Distortion{read_distortion(params.at("g"))};
  } else {
    throw ScenarioError(r.path() + ".kind", "unknown risk kind '" + kind + "'");
  }
  tagged(r.path(), [&] {
    validate(f);
    return 0;
  });
  return f;
}

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  json outcomes = json::array();
  for (const auto& o : s.space().outcomes()) outcomes.push_back({{"label", o.label}, {"loss", o.loss}});
  doc["outcomes"] = outcomes;
  json actions = json::array();
  for (const auto& a : s.actions().actions())
    actions.push_back({{"level", a.level}, {"cost", a.cost}});
  doc["actions"] = actions;
  json kernel = json::array();
  const auto& t = s.kernel.table();
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < t.cols(); ++c) row.push_back(t(r, c));
    kernel.push_back(row);
  }
  doc["kernel"] = kernel;
  json agent;
  agent["risk"] = risk_json(s.agent.risk);
  if (s.agent.reservation) agent["reservation"] = *s.agent.reservation;
  doc["agent"] = agent;
  doc["insurer"] = {{"utility", curve_json(s.insurer.utility)}};
  return doc.dump(2) + "\n";
}

Scenario from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", "parse error at " + position(text, e.byte) + ": " + e.what());
  }
  const Reader root(doc, "");
  root.allow({"name", "outcomes", "actions", "kernel", "agent", "insurer"});

  Scenario s;
  s.name = root.at("name").text();

  const Reader outs = root.at("outcomes");
  std::vector<Outcome> outcomes;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const Reader o = outs.at(i);
    o.allow({"label", "loss"});
    outcomes.push_back({o.at("label").text(), o.at("loss").number()});
  }
  OutcomeSpace space = tagged("outcomes", [&] { return OutcomeSpace(std::move(outcomes)); });

  const Reader acts = root.at("actions");
  std::vector<ActionLevel> levels;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const Reader a = acts.at(i);
    a.allow({"level", "cost"});
    levels.push_back({a.at("level").number(), a.at("cost").number()});
  }
  ActionGrid actions = tagged("actions", [&] { return ActionGrid(std::move(levels)); });

  const Reader rows = root.at("kernel");
  Matrix table(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(space.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Reader row = rows.at(r);
    if (row.size() != space.size())
      row.fail("expected " + std::to_string(space.size()) + " probabilities, got " +
               std::to_string(row.size()));
    for (std::size_t c = 0; c < row.size(); ++c)
      table(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).number();
  }
  if (static_cast<std::size_t>(table.rows()) != actions.size())
    rows.fail("expected one row per action (" + std::to_string(actions.size()) + ")");
  const auto report = validate_kernel_table(space, actions, table);
  if (!report.ok()) {
    // Issues are already prefixed "kernel[i]: ..."; name the first offending row as the field.
    const auto& first = report.issues.front();
    throw ScenarioError(first.substr(0, first.find(':')), report.str());
  }
  s.kernel = RiskKernel(std::move(space), std::move(actions), std::move(table));

  const Reader agent = root.at("agent");
  agent.allow({"risk", "reservation"});
  s.agent.risk = read_risk(agent.at("risk"));
  if (agent.has("reservation")) s.agent.reservation = agent.at("reservation").number();

  const Reader insurer = root.at("insurer");
  insurer.allow({"utility"});
  s.insurer.utility = read_curve(insurer.at("utility"));

  tagged("", [&] {
    validate_scenario(s);
    return 0;
  });
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(e.field(), path.string() + ": " + e.message());
  }
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(s);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace cinsure
