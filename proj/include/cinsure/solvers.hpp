#pragma once

#include "cinsure/contracts.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cinsure {

/// Discretized contract space.
///
/// Linear mode enumerates premiums x coverages with indemnity = coverage * loss. Tabular mode
/// enumerates premiums x (one coverage rate per outcome), i.e. the Cartesian product of the
/// per-outcome rate lists.
struct ContractGrid {
  enum class Mode { linear, tabular };

  Mode mode = Mode::linear;
  std::vector<double> premiums;
  std::vector<double> coverages;
  std::vector<std::vector<double>> outcome_rates;

  static ContractGrid linear(std::vector<double> premiums, std::vector<double> coverages);
  static ContractGrid tabular(std::vector<double> premiums,
                              std::vector<std::vector<double>> outcome_rates);

  std::size_t size() const;
  ValidationReport validate(std::size_t outcome_count) const;
};

/// Inclusive arithmetic range lo, lo + step, ... <= hi (+1e-9 slack); values are lo + k*step.
std::vector<double> inclusive_range(double lo, double hi, double step);

struct SolverOptions {
  /// How the agent picks among equally good actions (hidden-info and intensity).
  TieBreak tie_break = TieBreak::insurer_optimal;
};

/// First-best: maximize the insurer objective jointly over (contract, action) subject to IR.
/// Ties within 1e-9 of the maximum go to the lowest action, then lowest premium, then highest
/// coverage. Returns nullopt when no pair satisfies IR.
std::optional<DesignResult> solve_full_info(const Scenario& s, const ContractGrid& grid,
                                            const SolverOptions& opts = {});

/// Second-best: as first-best, but the action must be the agent's own best response.
std::optional<DesignResult> solve_hidden_info(const Scenario& s, const ContractGrid& grid,
                                              const SolverOptions& opts = {});

/// Smooth one-dimensional family for the first-order approach: loss L with breach
/// probability p(x) on a continuous investment interval [lo, hi] with cost kappa(x).
/// Missing slope functions are replaced by central differences.
struct SmoothFamily {
  double loss = 0.0;
  std::function<double(double)> breach;
  std::function<double(double)> breach_slope;
  std::function<double(double)> cost;
  std::function<double(double)> cost_slope;
  double lo = 0.0;
  double hi = 1.0;
  RiskFunctional agent = Expectation{};  // Expectation or ExpectedDisutility
  InsurerSpec insurer;
  std::optional<double> reservation;

  /// p(x) = p0 * exp(-decay x), kappa(x) = unit_cost * x.
  static SmoothFamily exponential_breach(double loss, double p0, double decay, double unit_cost,
                                         double lo, double hi);
};

/// Evaluated user cost of a linear contract at investment x.
double family_user_cost(const SmoothFamily& f, const LinearContract& c, double x);
/// d/dx of family_user_cost.
double family_cost_slope(const SmoothFamily& f, const LinearContract& c, double x);
/// Expected insurer utility at (c, x).
double family_insurer_objective(const SmoothFamily& f, const LinearContract& c, double x);

struct StationaryPoint {
  double x = 0.0;
  double slope = 0.0;
  bool boundary = false;
};

/// The agent's response via stationarity of the cost slope, clamped to [lo, hi]. Throws
/// std::domain_error if the sampled slope is not non-decreasing on the interval, since the
/// stationary point is then not guaranteed to be the cost minimum.
StationaryPoint first_order_response(const SmoothFamily& f, const LinearContract& c);

/// Second-best over a linear contract grid with IC replaced by stationarity.
std::optional<DesignResult> solve_first_order(const SmoothFamily& f, const ContractGrid& grid);

struct PreferenceCandidate {
  std::string label;
  RiskFunctional risk;
  double shaping_cost = 0.0;
  bool status_quo = false;
};

struct PreferenceDesignSpace {
  std::vector<PreferenceCandidate> candidates;

  ValidationReport validate() const;
};

struct PreferenceOutcome {
  PreferenceCandidate candidate;
  std::optional<DesignResult> second_best;
  std::optional<DesignResult> first_best;
  /// second-best objective net of the shaping cost; empty when infeasible.
  std::optional<double> net_value;
};

struct PreferenceDesignReport {
  std::vector<PreferenceOutcome> rows;
  std::optional<std::size_t> best;  // empty when every candidate is infeasible
};

/// Re-solves the second-best with the agent's functional replaced by each candidate. The
/// reservation is re-derived for the candidate unless its functional equals the scenario's.
/// Best is the highest net value; ties within 1e-9 go to the lower shaping cost, then to
/// the earlier candidate.
PreferenceDesignReport solve_preference_design(const Scenario& s, const ContractGrid& grid,
                                               const PreferenceDesignSpace& space,
                                               const SolverOptions& opts = {});

/// Scenario with the agent's functional replaced by a preference candidate.
Scenario with_preference(const Scenario& s, const RiskFunctional& risk);

struct LabeledResult {
  std::string label;
  DesignResult result;
};

struct ComparisonRow {
  std::string label;
  Formulation formulation = Formulation::full_info;
  double objective = 0.0;
  double gap_to_best = 0.0;
  std::optional<MoralHazardIntensity> intensity;
};

/// Rows sorted by objective (descending). Throws std::invalid_argument on fingerprint mismatch
/// and std::logic_error if a second-best beats a first-best or an objective fails
/// recomputation.
std::vector<ComparisonRow> compare_contracts(const Scenario& s,
                                             const std::vector<LabeledResult>& results);

}  // namespace cinsure
