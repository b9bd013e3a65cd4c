#pragma once

#include "cinsure/preferences.hpp"
#include "cinsure/riskspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cinsure {

/// Premium plus per-outcome indemnity, 0 <= indemnity <= loss.
struct Contract {
  double premium = 0.0;
  Vector indemnity;
};

/// Premium p with coverage rate c: indemnity(xi) = c * loss(xi).
struct LinearContract {
  double premium = 0.0;
  double coverage = 0.0;

  bool operator==(const LinearContract&) const = default;
};

Contract to_contract(const LinearContract& lc, const OutcomeSpace& space);
inline Contract no_insurance(const OutcomeSpace& space) { return to_contract({0.0, 0.0}, space); }

ValidationReport validate_contract(const Contract& c, const OutcomeSpace& space);

struct AgentSpec {
  RiskFunctional risk = Expectation{};
  /// Overrides the computed uninsured minimum cost when set.
  std::optional<double> reservation;
};

struct InsurerSpec {
  /// Applied per outcome to profit through its gain-equivalent; linear is risk-neutral.
  UtilityCurve utility = UtilityCurve::linear();
};

/// One principal-agent instance. The kernel owns the outcome space and action grid.
struct Scenario {
  std::string name;
  RiskKernel kernel;
  AgentSpec agent;
  InsurerSpec insurer;

  const OutcomeSpace& space() const { return kernel.space(); }
  const ActionGrid& actions() const { return kernel.actions(); }
};

/// Throws std::invalid_argument if the agent/insurer parameters are malformed.
void validate_scenario(const Scenario& s);

/// Stable 64-bit hash of the scenario contents, as 16 hex digits.
std::string fingerprint(const Scenario& s);

enum class TieBreak {
  lowest,           // smallest action index
  insurer_optimal,  // agent breaks ties in the insurer's favour
  pessimistic,      // ties broken against the insurer
};

const char* to_string(TieBreak t);

/// Per-outcome total user cost kappa(x) + premium + loss - indemnity under P(., x).
LossDistribution user_cost_distribution(const Scenario& s, const Contract& c, std::size_t action);
/// Per-outcome insurer profit premium - indemnity under P(., x).
LossDistribution insurer_profit_distribution(const Scenario& s, const Contract& c,
                                             std::size_t action);

/// The agent's evaluated cost of (c, x).
double user_cost(const Scenario& s, const Contract& c, std::size_t action);
/// Expected insurer utility of profit at (c, x). Summed sequentially over outcomes.
double insurer_objective(const Scenario& s, const Contract& c, std::size_t action);

struct Reservation {
  double value = 0.0;
  std::size_t action = 0;  // uninsured argmin, lowest index on ties
  bool derived = true;     // false when the scenario overrides the value
};

/// Minimum evaluated cost without insurance, over the action grid.
Reservation compute_reservation(const Scenario& s);
/// The IR threshold in force: the scenario override if present, else computed.
Reservation reservation(const Scenario& s);

struct IrCheck {
  bool satisfied = false;
  double cost = 0.0;
  double reservation = 0.0;

  explicit operator bool() const { return satisfied; }
};

IrCheck ir_check(const Scenario& s, const Contract& c, std::size_t action);
IrCheck ir_check(const Scenario& s, const Contract& c, std::size_t action, double reservation);

struct BestResponse {
  std::vector<std::size_t> argmin;  // all actions within kCostTol of the minimum, ascending
  std::size_t chosen = 0;
  Vector costs;  // evaluated cost per action
};

BestResponse best_response(const Scenario& s, const Contract& c, TieBreak tie = TieBreak::lowest);

enum class Formulation { full_info, hidden_info, first_order };

const char* to_string(Formulation f);

struct MoralHazardIntensity {
  double action_gap = 0.0;  // |x_FB - x_BR| in level units
  double profit_gap = 0.0;  // objective(c_FB, x_FB) - objective(c_FB, x_BR)
  std::size_t response = 0; // x_BR index
};

struct DesignResult {
  Formulation formulation = Formulation::full_info;
  Contract contract;
  std::optional<LinearContract> linear;
  std::optional<std::size_t> action;  // grid index; empty for continuous families
  double action_level = 0.0;
  double objective = 0.0;
  double user_cost = 0.0;
  double reservation = 0.0;
  bool ir_binding = false;
  bool ic_satisfied = false;
  std::optional<MoralHazardIntensity> intensity;
  std::string fingerprint;

  /// A profitable contract exists.
  bool market_viable() const { return objective > kCostTol; }
};

/// Gap between the first-best action and the agent's own response to the first-best contract.
/// Throws std::invalid_argument if the result was produced for a different scenario.
MoralHazardIntensity moral_hazard_intensity(const Scenario& s, const DesignResult& first_best,
                                            TieBreak tie = TieBreak::insurer_optimal);

}  // namespace cinsure
