#include "cinsure/contracts.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>

namespace cinsure {

Contract to_contract(const LinearContract& lc, const OutcomeSpace& space) {
  if (!(lc.premium >= 0.0) || !std::isfinite(lc.premium))
    throw std::invalid_argument("premium must be finite and non-negative");
  if (!(lc.coverage >= 0.0 && lc.coverage <= 1.0))
    throw std::invalid_argument("coverage rate must lie in [0, 1]");
  return {lc.premium, lc.coverage * space.losses()};
}

ValidationReport validate_contract(const Contract& c, const OutcomeSpace& space) {
  ValidationReport r;
  if (!(c.premium >= 0.0) || !std::isfinite(c.premium))
    r.add("premium must be finite and non-negative");
  if (static_cast<std::size_t>(c.indemnity.size()) != space.size()) {
    r.add("indemnity length " + std::to_string(c.indemnity.size()) + " does not match " +
          std::to_string(space.size()) + " outcomes");
    return r;
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double v = c.indemnity[static_cast<Eigen::Index>(i)];
    if (!(v >= 0.0)) r.add("indemnity[" + std::to_string(i) + "] is negative");
    if (v > space[i].loss) r.add("indemnity[" + std::to_string(i) + "] exceeds the loss");
  }
  return r;
}

namespace {

void require_contract(const Scenario& s, const Contract& c) {
  auto r = validate_contract(c, s.space());
  if (!r.ok()) throw std::invalid_argument("invalid contract: " + r.str());
}

void require_action(const Scenario& s, std::size_t action) {
  if (action >= s.actions().size())
    throw std::out_of_range("action index " + std::to_string(action) + " not in grid");
}

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) {
    if (v == 0.0) v = 0.0;  // fold -0.0
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof bits);
  }
  void add(std::uint64_t v) { bytes(&v, sizeof v); }
  void add(const std::string& s) {
    add(static_cast<std::uint64_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void add(const UtilityCurve& u) {
    add(static_cast<std::uint64_t>(u.kind()));
    add(u.parameter());
    for (const auto& [x, y] : u.knots()) add(x), add(y);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

void validate_scenario(const Scenario& s) {
  validate(s.agent.risk);
  if (s.agent.reservation && !std::isfinite(*s.agent.reservation))
    throw std::invalid_argument("agent reservation must be finite");
  if (s.space().size() == 0 || s.actions().size() == 0)
    throw std::invalid_argument("scenario has an empty kernel");
}

std::string fingerprint(const Scenario& s) {
  Fnv1a h;
  h.add(s.name);
  for (const auto& o : s.space().outcomes()) h.add(o.label), h.add(o.loss);
  for (const auto& a : s.actions().actions()) h.add(a.level), h.add(a.cost);
  const auto& t = s.kernel.table();
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c) h.add(t(r, c));
  h.add(static_cast<std::uint64_t>(s.kernel.flagged_monotone()));
  h.add(static_cast<std::uint64_t>(s.agent.risk.index()));
  std::visit(
      [&h](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExpectedDisutility>) h.add(f.curve);
        if constexpr (std::is_same_v<T, AVaR>) h.add(f.alpha);
        if constexpr (std::is_same_v<T, Distortion>) {
          h.add(static_cast<std::uint64_t>(f.g.kind()));
          h.add(f.g.parameter());
          for (const auto& [x, y] : f.g.knots()) h.add(x), h.add(y);
        }
      },
      s.agent.risk);
  h.add(static_cast<std::uint64_t>(s.agent.reservation.has_value()));
  if (s.agent.reservation) h.add(*s.agent.reservation);
  h.add(s.insurer.utility);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

const char* to_string(TieBreak t) {
  switch (t) {
    case TieBreak::lowest:
      return "low";
    case TieBreak::insurer_optimal:
      return "insurer";
    case TieBreak::pessimistic:
      return "pessimistic";
  }
  return "?";
}

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::full_info:
      return "full-info";
    case Formulation::hidden_info:
      return "hidden-info";
    case Formulation::first_order:
      return "first-order";
  }
  return "?";
}

LossDistribution user_cost_distribution(const Scenario& s, const Contract& c, std::size_t action) {
  require_action(s, action);
  require_contract(s, c);
  const double fixed = s.actions()[action].cost + c.premium;
  Vector cost = (s.space().losses() - c.indemnity).array() + fixed;
  return {std::move(cost), s.kernel.table().row(static_cast<Eigen::Index>(action)).transpose()};
}

LossDistribution insurer_profit_distribution(const Scenario& s, const Contract& c,
                                             std::size_t action) {
  require_action(s, action);
  require_contract(s, c);
  Vector profit = c.premium - c.indemnity.array();
  return {std::move(profit), s.kernel.table().row(static_cast<Eigen::Index>(action)).transpose()};
}

double user_cost(const Scenario& s, const Contract& c, std::size_t action) {
  return evaluate_risk(s.agent.risk, user_cost_distribution(s, c, action));
}

double insurer_objective(const Scenario& s, const Contract& c, std::size_t action) {
  const auto d = insurer_profit_distribution(s, c, action);
  const auto& v = s.insurer.utility;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) acc += d.probs[i] * v.gain(d.values[i]);
  return acc;
}

Reservation compute_reservation(const Scenario& s) {
  const Contract none = no_insurance(s.space());
  Reservation best{std::numeric_limits<double>::infinity(), 0, true};
  for (std::size_t x = 0; x < s.actions().size(); ++x) {
    const double cost = user_cost(s, none, x);
    if (cost < best.value) best = {cost, x, true};
  }
  return best;
}

Reservation reservation(const Scenario& s) {
  auto r = compute_reservation(s);
  if (s.agent.reservation) {
    r.value = *s.agent.reservation;
    r.derived = false;
  }
  return r;
}

IrCheck ir_check(const Scenario& s, const Contract& c, std::size_t action, double ubar) {
  const double cost = user_cost(s, c, action);
  return {cost <= ubar + kCostTol, cost, ubar};
}

IrCheck ir_check(const Scenario& s, const Contract& c, std::size_t action) {
  return ir_check(s, c, action, reservation(s).value);
}

BestResponse best_response(const Scenario& s, const Contract& c, TieBreak tie) {
  BestResponse br;
  const auto n = s.actions().size();
  br.costs.resize(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) br.costs[static_cast<Eigen::Index>(x)] = user_cost(s, c, x);
  const double lo = br.costs.minCoeff();
  for (std::size_t x = 0; x < n; ++x)
    if (br.costs[static_cast<Eigen::Index>(x)] <= lo + kCostTol) br.argmin.push_back(x);

  br.chosen = br.argmin.front();
  if (tie == TieBreak::lowest || br.argmin.size() == 1) return br;
  double pick = insurer_objective(s, c, br.chosen);
  for (std::size_t k = 1; k < br.argmin.size(); ++k) {
    const double v = insurer_objective(s, c, br.argmin[k]);
    const bool better = tie == TieBreak::insurer_optimal ? v > pick : v < pick;
    if (better) {
      pick = v;
      br.chosen = br.argmin[k];
    }
  }
  return br;
}

MoralHazardIntensity moral_hazard_intensity(const Scenario& s, const DesignResult& first_best,
                                            TieBreak tie) {
  if (first_best.fingerprint != fingerprint(s))
    throw std::invalid_argument("stale result: scenario fingerprint mismatch");
  if (!first_best.action)
    throw std::invalid_argument("moral-hazard intensity needs a grid action");
  const std::size_t x_fb = *first_best.action;
  const auto br = best_response(s, first_best.contract, tie);
  std::size_t x_br = br.chosen;
  // An agent indifferent between x_FB and other actions follows the insurer's recommendation.
  if (tie == TieBreak::insurer_optimal &&
      std::find(br.argmin.begin(), br.argmin.end(), x_fb) != br.argmin.end())
    x_br = x_fb;
  MoralHazardIntensity mh;
  mh.response = x_br;
  mh.action_gap = std::abs(s.actions()[x_fb].level - s.actions()[x_br].level);
  mh.profit_gap = insurer_objective(s, first_best.contract, x_fb) -
                  insurer_objective(s, first_best.contract, x_br);
  return mh;
}

}  // namespace cinsure
