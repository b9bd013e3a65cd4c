#pragma once

#include "cinsure/scenarios.hpp"
#include "cinsure/solvers.hpp"

#include <random>

namespace cinsure::testing {

/// Two-point scenario used throughout: losses {0, 100}, costs 10x, breach 0.5 / 0.2 / 0.1.
inline Scenario s1(RiskFunctional agent = Expectation{}) {
  return preset_two_point(100.0, {0.5, 0.2, 0.1}, {0.0, 10.0, 20.0}, std::move(agent), "S1");
}

/// Premium 0..60 step 5, coverage 0..1 step 0.25.
inline ContractGrid s1_grid() {
  return ContractGrid::linear(inclusive_range(0.0, 60.0, 5.0), inclusive_range(0.0, 1.0, 0.25));
}

inline Vector random_simplex(std::mt19937_64& rng, Eigen::Index n, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = u(rng) < zero_prob ? 0.0 : -std::log(1.0 - u(rng));
  if (p.sum() == 0.0) p[0] = 1.0;
  p /= p.sum();
  return p;
}

/// Random distribution on a small integer support so that supports of different draws overlap.
inline LossDistribution random_distribution(std::mt19937_64& rng, int max_atoms = 6) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_int_distribution<int> value(0, 10);
  const int n = count(rng);
  LossDistribution d;
  d.values.resize(n);
  for (int i = 0; i < n; ++i) d.values[i] = value(rng);
  d.probs = random_simplex(rng, n, 0.2);
  return d;
}

inline RiskFunctional random_functional(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind(rng)) {
    case 0:
      return Expectation{};
    case 1:
      return ExpectedDisutility{UtilityCurve::exponential(0.001 + 0.05 * u(rng))};
    case 2:
      return AVaR{0.05 + 0.95 * u(rng)};
    default:
      return Distortion{DistortionFunction::power(0.3 + 1.7 * u(rng))};
  }
}

/// Random instance: <= 5 actions, <= 5 outcomes, integer losses, non-decreasing costs.
inline Scenario random_scenario(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 5);
  std::uniform_int_distribution<int> loss(0, 100);
  std::uniform_int_distribution<int> step(0, 15);
  const int n_out = size(rng), n_act = size(rng);
  std::vector<Outcome> outcomes;
  for (int i = 0; i < n_out; ++i) outcomes.push_back({"o" + std::to_string(i), double(loss(rng))});
  std::vector<ActionLevel> actions;
  double cost = 0.0;
  for (int x = 0; x < n_act; ++x) {
    actions.push_back({double(x), cost});
    cost += step(rng);
  }
  Matrix table(n_act, n_out);
  for (int x = 0; x < n_act; ++x) table.row(x) = random_simplex(rng, n_out, 0.15).transpose();
  Scenario s{"random", RiskKernel(OutcomeSpace(outcomes), ActionGrid(actions), table),
             {random_functional(rng), std::nullopt}, {}};
  return s;
}

/// Linear grid with at most 200 contracts.
inline ContractGrid random_grid(std::mt19937_64& rng, double max_premium) {
  std::uniform_int_distribution<int> np(1, 20), nc(1, 10);
  const int p = np(rng), c = nc(rng);
  std::vector<double> premiums, coverages;
  for (int i = 0; i < p; ++i) premiums.push_back(p == 1 ? 0.0 : max_premium * i / (p - 1));
  for (int i = 0; i < c; ++i) coverages.push_back(c == 1 ? 1.0 : double(i) / (c - 1));
  return ContractGrid::linear(premiums, coverages);
}

}  // namespace cinsure::testing
