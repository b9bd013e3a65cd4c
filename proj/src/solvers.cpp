#include "cinsure/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace cinsure {

ContractGrid ContractGrid::linear(std::vector<double> premiums, std::vector<double> coverages) {
  ContractGrid g;
  g.mode = Mode::linear;
  g.premiums = std::move(premiums);
  g.coverages = std::move(coverages);
  return g;
}

ContractGrid ContractGrid::tabular(std::vector<double> premiums,
                                   std::vector<std::vector<double>> outcome_rates) {
  ContractGrid g;
  g.mode = Mode::tabular;
  g.premiums = std::move(premiums);
  g.outcome_rates = std::move(outcome_rates);
  return g;
}

std::size_t ContractGrid::size() const {
  std::size_t n = premiums.size();
  if (mode == Mode::linear) return n * coverages.size();
  for (const auto& r : outcome_rates) n *= r.size();
  return outcome_rates.empty() ? 0 : n;
}

namespace {

void check_axis(ValidationReport& r, const std::vector<double>& v, const std::string& name,
                double lo, double hi) {
  if (v.empty()) {
    r.add(name + " is empty");
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < lo || v[i] > hi)
      r.add(name + "[" + std::to_string(i) + "] out of bounds");
    if (i > 0 && !(v[i] > v[i - 1])) r.add(name + " must be strictly increasing");
  }
}

}  // namespace

ValidationReport ContractGrid::validate(std::size_t outcome_count) const {
  ValidationReport r;
  check_axis(r, premiums, "premiums", 0.0, std::numeric_limits<double>::max());
  if (mode == Mode::linear) {
    check_axis(r, coverages, "coverages", 0.0, 1.0);
  } else {
    if (outcome_rates.size() != outcome_count)
      r.add("tabular grid needs one rate list per outcome");
    for (std::size_t k = 0; k < outcome_rates.size(); ++k)
      check_axis(r, outcome_rates[k], "outcome_rates[" + std::to_string(k) + "]", 0.0, 1.0);
  }
  return r;
}

std::vector<double> inclusive_range(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || hi < lo)
    throw std::invalid_argument("range needs finite lo <= hi and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + static_cast<double>(k) * step;
  return out;
}

namespace {

struct GridPoint {
  double premium = 0.0;
  Vector rates;
  std::optional<LinearContract> linear;
  Contract contract;
};

GridPoint point_at(const ContractGrid& g, const OutcomeSpace& space, std::size_t index) {
  GridPoint p;
  const auto n_out = static_cast<Eigen::Index>(space.size());
  if (g.mode == ContractGrid::Mode::linear) {
    const auto nc = g.coverages.size();
    p.premium = g.premiums[index / nc];
    const double cov = g.coverages[index % nc];
    p.rates = Vector::Constant(n_out, cov);
    p.linear = LinearContract{p.premium, cov};
    p.contract = to_contract(*p.linear, space);
    return p;
  }
  p.rates.resize(n_out);
  // Last outcome varies fastest.
  for (std::size_t k = g.outcome_rates.size(); k-- > 0;) {
    const auto& axis = g.outcome_rates[k];
    p.rates[static_cast<Eigen::Index>(k)] = axis[index % axis.size()];
    index /= axis.size();
  }
  p.premium = g.premiums[index];
  p.contract = {p.premium, p.rates.cwiseProduct(space.losses())};
  return p;
}

struct Candidate {
  std::size_t point = 0;
  std::size_t action = 0;
  double objective = 0.0;
  double cost = 0.0;
};

// Lexicographic preference among near-ties: lower action, lower premium, higher coverage.
bool precedes(const Candidate& a, const GridPoint& pa, const Candidate& b, const GridPoint& pb) {
  if (a.action != b.action) return a.action < b.action;
  if (pa.premium != pb.premium) return pa.premium < pb.premium;
  for (Eigen::Index k = 0; k < pa.rates.size(); ++k)
    if (pa.rates[k] != pb.rates[k]) return pa.rates[k] > pb.rates[k];
  return false;
}

std::optional<Candidate> select(const std::vector<Candidate>& feasible, const ContractGrid& g,
                                const OutcomeSpace& space) {
  if (feasible.empty()) return std::nullopt;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& c : feasible) top = std::max(top, c.objective);
  const Candidate* best = nullptr;
  GridPoint best_point;
  for (const auto& c : feasible) {
    if (c.objective < top - kCostTol) continue;
    GridPoint p = point_at(g, space, c.point);
    if (!best || precedes(c, p, *best, best_point)) {
      best = &c;
      best_point = std::move(p);
    }
  }
  return *best;
}

void require_grid(const ContractGrid& grid, const OutcomeSpace& space) {
  auto r = grid.validate(space.size());
  if (!r.ok()) throw std::invalid_argument("invalid contract grid: " + r.str());
}

DesignResult make_result(const Scenario& s, const ContractGrid& g, const Candidate& c,
                         Formulation f, double ubar, const std::string& fp) {
  GridPoint p = point_at(g, s.space(), c.point);
  DesignResult r;
  r.formulation = f;
  r.contract = std::move(p.contract);
  r.linear = p.linear;
  r.action = c.action;
  r.action_level = s.actions()[c.action].level;
  r.objective = c.objective;
  r.user_cost = c.cost;
  r.reservation = ubar;
  r.ir_binding = std::abs(c.cost - ubar) <= kCostTol;
  const auto br = best_response(s, r.contract);
  r.ic_satisfied = std::find(br.argmin.begin(), br.argmin.end(), c.action) != br.argmin.end();
  r.fingerprint = fp;
  return r;
}

}  // namespace

std::optional<DesignResult> solve_full_info(const Scenario& s, const ContractGrid& grid,
                                            const SolverOptions& opts) {
  validate_scenario(s);
  require_grid(grid, s.space());
  const double ubar = reservation(s).value;
  std::vector<Candidate> feasible;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridPoint p = point_at(grid, s.space(), i);
    for (std::size_t x = 0; x < s.actions().size(); ++x) {
      const auto ir = ir_check(s, p.contract, x, ubar);
      if (!ir) continue;
      feasible.push_back({i, x, insurer_objective(s, p.contract, x), ir.cost});
    }
  }
  const auto best = select(feasible, grid, s.space());
  if (!best) return std::nullopt;
  auto result = make_result(s, grid, *best, Formulation::full_info, ubar, fingerprint(s));
  result.intensity = moral_hazard_intensity(s, result, opts.tie_break);
  return result;
}

std::optional<DesignResult> solve_hidden_info(const Scenario& s, const ContractGrid& grid,
                                              const SolverOptions& opts) {
  validate_scenario(s);
  require_grid(grid, s.space());
  const double ubar = reservation(s).value;
  std::vector<Candidate> feasible;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridPoint p = point_at(grid, s.space(), i);
    const auto br = best_response(s, p.contract, opts.tie_break);
    const double cost = br.costs[static_cast<Eigen::Index>(br.chosen)];
    if (!(cost <= ubar + kCostTol)) continue;
    feasible.push_back({i, br.chosen, insurer_objective(s, p.contract, br.chosen), cost});
  }
  const auto best = select(feasible, grid, s.space());
  if (!best) return std::nullopt;
  auto result = make_result(s, grid, *best, Formulation::hidden_info, ubar, fingerprint(s));
  result.ic_satisfied = true;
  return result;
}

// ---------------------------------------------------------------------------
// First-order approach

SmoothFamily SmoothFamily::exponential_breach(double loss, double p0, double decay,
                                              double unit_cost, double lo, double hi) {
  SmoothFamily f;
  f.loss = loss;
  f.breach = [p0, decay](double x) { return p0 * std::exp(-decay * x); };
  f.breach_slope = [p0, decay](double x) { return -decay * p0 * std::exp(-decay * x); };
  f.cost = [unit_cost](double x) { return unit_cost * x; };
  f.cost_slope = [unit_cost](double) { return unit_cost; };
  f.lo = lo;
  f.hi = hi;
  return f;
}

namespace {

double central_difference(const std::function<double(double)>& fn, double x) {
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

double slope_of(const std::function<double(double)>& fn,
                const std::function<double(double)>& slope, double x) {
  return slope ? slope(x) : central_difference(fn, x);
}

const UtilityCurve& agent_curve(const SmoothFamily& f) {
  static const UtilityCurve linear = UtilityCurve::linear();
  if (std::holds_alternative<Expectation>(f.agent)) return linear;
  if (const auto* e = std::get_if<ExpectedDisutility>(&f.agent)) return e->curve;
  throw std::invalid_argument(
      "first-order approach supports expectation and expected-disutility agents only");
}

void require_family(const SmoothFamily& f) {
  if (!f.breach || !f.cost) throw std::invalid_argument("family needs breach and cost curves");
  if (!(f.lo < f.hi)) throw std::invalid_argument("family interval must satisfy lo < hi");
  if (!(f.loss >= 0.0)) throw std::invalid_argument("family loss must be non-negative");
  agent_curve(f);
}

}  // namespace

double family_user_cost(const SmoothFamily& f, const LinearContract& c, double x) {
  const auto& u = agent_curve(f);
  const double p = f.breach(x);
  const double base = f.cost(x) + c.premium;
  return (1.0 - p) * u(base) + p * u(base + (1.0 - c.coverage) * f.loss);
}

double family_cost_slope(const SmoothFamily& f, const LinearContract& c, double x) {
  const auto& u = agent_curve(f);
  const double p = f.breach(x);
  const double dp = slope_of(f.breach, f.breach_slope, x);
  const double dk = slope_of(f.cost, f.cost_slope, x);
  const double base = f.cost(x) + c.premium;
  const double hit = base + (1.0 - c.coverage) * f.loss;
  return dp * (u(hit) - u(base)) + dk * ((1.0 - p) * u.derivative(base) + p * u.derivative(hit));
}

double family_insurer_objective(const SmoothFamily& f, const LinearContract& c, double x) {
  const double p = f.breach(x);
  const auto& v = f.insurer.utility;
  return (1.0 - p) * v.gain(c.premium) + p * v.gain(c.premium - c.coverage * f.loss);
}

StationaryPoint first_order_response(const SmoothFamily& f, const LinearContract& c) {
  require_family(f);
  auto slope = [&](double x) { return family_cost_slope(f, c, x); };

  constexpr int kSamples = 256;
  double prev = slope(f.lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double x = f.lo + (f.hi - f.lo) * k / kSamples;
    const double d = slope(x);
    if (d < prev - 1e-9 * std::max(1.0, std::abs(prev)))
      throw std::domain_error("cost slope is not non-decreasing on the interval; "
                              "first-order approach invalid for this family");
    prev = d;
  }

  const double at_lo = slope(f.lo);
  if (at_lo >= 0.0) return {f.lo, at_lo, true};
  const double at_hi = slope(f.hi);
  if (at_hi <= 0.0) return {f.hi, at_hi, true};

  double a = f.lo, b = f.hi;
  double mid = 0.5 * (a + b), d = slope(mid);
  for (int it = 0; it < 200 && std::abs(d) > 1e-8; ++it) {
    if (d > 0.0)
      b = mid;
    else
      a = mid;
    const double next = 0.5 * (a + b);
    if (next == mid) break;
    mid = next;
    d = slope(mid);
  }
  return {mid, d, false};
}

std::optional<DesignResult> solve_first_order(const SmoothFamily& f, const ContractGrid& grid) {
  require_family(f);
  if (grid.mode != ContractGrid::Mode::linear)
    throw std::invalid_argument("first-order solver needs a linear contract grid");
  if (grid.premiums.empty() || grid.coverages.empty())
    throw std::invalid_argument("empty outer contract grid");
  auto r = grid.validate(2);
  if (!r.ok()) throw std::invalid_argument("invalid contract grid: " + r.str());

  double ubar = 0.0;
  if (f.reservation) {
    ubar = *f.reservation;
  } else {
    const LinearContract none{0.0, 0.0};
    ubar = family_user_cost(f, none, first_order_response(f, none).x);
  }

  struct Pick {
    LinearContract contract;
    double x, objective, cost;
  };
  std::vector<Pick> feasible;
  for (double premium : grid.premiums)
    for (double coverage : grid.coverages) {
      const LinearContract c{premium, coverage};
      const double x = first_order_response(f, c).x;
      const double cost = family_user_cost(f, c, x);
      if (!(cost <= ubar + kCostTol)) continue;
      feasible.push_back({c, x, family_insurer_objective(f, c, x), cost});
    }
  if (feasible.empty()) return std::nullopt;

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : feasible) top = std::max(top, p.objective);
  const Pick* best = nullptr;
  for (const auto& p : feasible) {
    if (p.objective < top - kCostTol) continue;
    const bool wins =
        !best || p.x < best->x ||
        (p.x == best->x && (p.contract.premium < best->contract.premium ||
                            (p.contract.premium == best->contract.premium &&
                             p.contract.coverage > best->contract.coverage)));
    if (wins) best = &p;
  }

  DesignResult res;
  res.formulation = Formulation::first_order;
  res.contract = {best->contract.premium, Vector{{0.0, best->contract.coverage * f.loss}}};
  res.linear = best->contract;
  res.action_level = best->x;
  res.objective = best->objective;
  res.user_cost = best->cost;
  res.reservation = ubar;
  res.ir_binding = std::abs(best->cost - ubar) <= kCostTol;
  res.ic_satisfied = true;
  return res;
}

// ---------------------------------------------------------------------------
// Preference design

ValidationReport PreferenceDesignSpace::validate() const {
  ValidationReport r;
  if (candidates.empty()) r.add("preference design space is empty");
  int status_quo = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const std::string at = "candidates[" + std::to_string(i) + "]";
    if (!(c.shaping_cost >= 0.0) || !std::isfinite(c.shaping_cost))
      r.add(at + ": shaping cost must be finite and non-negative");
    if (c.status_quo) {
      ++status_quo;
      if (c.shaping_cost != 0.0) r.add(at + ": status quo must have zero shaping cost");
    }
    try {
      cinsure::validate(c.risk);
    } catch (const std::exception& e) {
      r.add(at + ": " + e.what());
    }
  }
  if (status_quo > 1) r.add("at most one candidate may be the status quo");
  return r;
}

Scenario with_preference(const Scenario& s, const RiskFunctional& risk) {
  Scenario t = s;
  if (!(risk == s.agent.risk)) {
    t.agent.risk = risk;
    t.agent.reservation.reset();
  }
  return t;
}

PreferenceDesignReport solve_preference_design(const Scenario& s, const ContractGrid& grid,
                                               const PreferenceDesignSpace& space,
                                               const SolverOptions& opts) {
  auto r = space.validate();
  if (!r.ok()) throw std::invalid_argument(r.str());
  PreferenceDesignReport report;
  for (const auto& cand : space.candidates) {
    const Scenario t = with_preference(s, cand.risk);
    PreferenceOutcome row;
    row.candidate = cand;
    row.second_best = solve_hidden_info(t, grid, opts);
    row.first_best = solve_full_info(t, grid, opts);
    if (row.second_best) row.net_value = row.second_best->objective - cand.shaping_cost;
    report.rows.push_back(std::move(row));
  }

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows)
    if (row.net_value) top = std::max(top, *row.net_value);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    if (!row.net_value || *row.net_value < top - kCostTol) continue;
    if (!report.best ||
        row.candidate.shaping_cost < report.rows[*report.best].candidate.shaping_cost)
      report.best = i;
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<ComparisonRow> compare_contracts(const Scenario& s,
                                             const std::vector<LabeledResult>& results) {
  const std::string fp = fingerprint(s);
  std::optional<double> best_full, best_hidden;
  for (const auto& lr : results) {
    const auto& r = lr.result;
    if (r.fingerprint != fp)
      throw std::invalid_argument("result '" + lr.label + "' belongs to a different scenario");
    if (r.action) {
      const double again = insurer_objective(s, r.contract, *r.action);
      if (std::abs(again - r.objective) > kCostTol)
        throw std::logic_error("result '" + lr.label + "' objective fails recomputation");
    }
    if (r.formulation == Formulation::full_info)
      best_full = std::max(best_full.value_or(r.objective), r.objective);
    if (r.formulation == Formulation::hidden_info)
      best_hidden = std::max(best_hidden.value_or(r.objective), r.objective);
  }
  if (best_full && best_hidden && *best_hidden > *best_full + kCostTol)
    throw std::logic_error("second-best objective exceeds first-best");

  std::vector<ComparisonRow> rows;
  for (const auto& lr : results)
    rows.push_back({lr.label, lr.result.formulation, lr.result.objective, 0.0,
                    lr.result.intensity});
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    return a.objective > b.objective;
  });
  if (!rows.empty())
    for (auto& row : rows) row.gap_to_best = rows.front().objective - row.objective;
  return rows;
}

}  // namespace cinsure
