#pragma once

#include "cinsure/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cinsure {

struct Outcome {
  std::string label;
  double loss = 0.0;

  bool operator==(const Outcome&) const = default;
};

/// Finite residual-risk outcome space: labelled outcomes with non-negative monetary losses.
class OutcomeSpace {
 public:
  OutcomeSpace() = default;
  explicit OutcomeSpace(std::vector<Outcome> outcomes);

  std::size_t size() const { return outcomes_.size(); }
  const Outcome& operator[](std::size_t i) const { return outcomes_[i]; }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const Vector& losses() const { return losses_; }
  double max_loss() const { return losses_.size() ? losses_.maxCoeff() : 0.0; }

  bool operator==(const OutcomeSpace& o) const { return outcomes_ == o.outcomes_; }

 private:
  std::vector<Outcome> outcomes_;
  Vector losses_;
};

/// A finite distribution: atom values (losses, costs or profits) with their probabilities.
template <typename Scalar>
struct Distribution {
  VectorX<Scalar> values;
  VectorX<Scalar> probs;

  Eigen::Index size() const { return values.size(); }
};

using LossDistribution = Distribution<double>;

inline LossDistribution make_distribution(const OutcomeSpace& space, Vector probs) {
  return {space.losses(), std::move(probs)};
}

template <typename Scalar>
ValidationReport validate_distribution(const Distribution<Scalar>& d) {
  using std::abs;
  ValidationReport report;
  if (d.values.size() != d.probs.size()) {
    report.add("length mismatch: " + std::to_string(d.values.size()) + " values, " +
               std::to_string(d.probs.size()) + " probabilities");
    return report;
  }
  if (d.probs.size() == 0) {
    report.add("empty distribution");
    return report;
  }
  Scalar sum(0);
  for (Eigen::Index i = 0; i < d.probs.size(); ++i) {
    const Scalar p = d.probs[i];
    if (!std::isfinite(static_cast<double>(p))) {
      report.add("non-finite probability at index " + std::to_string(i));
      continue;
    }
    if (p < Scalar(0)) report.add("negative probability at index " + std::to_string(i));
    if (p > Scalar(1)) report.add("probability above 1 at index " + std::to_string(i));
    if (!std::isfinite(static_cast<double>(d.values[i])))
      report.add("non-finite value at index " + std::to_string(i));
    sum += p;
  }
  if (abs(sum - Scalar(1)) > Scalar(kProbTol)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "sum = %.15g", static_cast<double>(sum));
    report.add(buf);
  }
  return report;
}

/// Validates probabilities against an outcome space (length must match the outcome count).
inline ValidationReport validate_distribution(const OutcomeSpace& space, const Vector& probs) {
  if (static_cast<std::size_t>(probs.size()) != space.size()) {
    ValidationReport r;
    r.add("length mismatch: space has " + std::to_string(space.size()) + " outcomes, got " +
          std::to_string(probs.size()) + " probabilities");
    return r;
  }
  return validate_distribution(make_distribution(space, probs));
}

template <typename Scalar>
void require_valid(const Distribution<Scalar>& d) {
  auto r = validate_distribution(d);
  if (!r.ok()) throw std::invalid_argument("invalid distribution: " + r.str());
}

template <typename Scalar>
Scalar mean(const Distribution<Scalar>& d) {
  Scalar acc(0);
  for (Eigen::Index i = 0; i < d.size(); ++i) acc += d.probs[i] * d.values[i];
  return acc;
}

template <typename Scalar>
struct CdfPoint {
  Scalar threshold;
  Scalar cumulative;
};

/// Step CDF on the distinct atom values, ascending. Equal values are merged.
template <typename Scalar>
std::vector<CdfPoint<Scalar>> cdf(const Distribution<Scalar>& d) {
  require_valid(d);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return d.values[a] < d.values[b]; });
  std::vector<CdfPoint<Scalar>> out;
  Scalar acc(0);
  for (auto i : order) {
    acc += d.probs[i];
    if (!out.empty() && out.back().threshold == d.values[i])
      out.back().cumulative = acc;
    else
      out.push_back({d.values[i], acc});
  }
  return out;
}

template <typename Scalar>
Scalar cdf_at(const std::vector<CdfPoint<Scalar>>& steps, Scalar t) {
  auto it = std::upper_bound(steps.begin(), steps.end(), t,
                             [](Scalar v, const CdfPoint<Scalar>& p) { return v < p.threshold; });
  return it == steps.begin() ? Scalar(0) : std::prev(it)->cumulative;
}

/// First-order dominance in the loss sense: true iff cdf(d1) <= cdf(d2) everywhere, i.e. d1
/// puts at least as much mass on severe losses as d2. Checked on the merged support.
template <typename Scalar>
bool fosd_dominates(const Distribution<Scalar>& d1, const Distribution<Scalar>& d2) {
  const auto c1 = cdf(d1);
  const auto c2 = cdf(d2);
  auto below = [&](Scalar t) { return cdf_at(c1, t) <= cdf_at(c2, t) + Scalar(kProbTol); };
  for (const auto& p : c1)
    if (!below(p.threshold)) return false;
  for (const auto& p : c2)
    if (!below(p.threshold)) return false;
  return true;
}

struct ActionLevel {
  double level = 0.0;
  double cost = 0.0;

  bool operator==(const ActionLevel&) const = default;
};

/// Investment levels x with their costs; levels strictly increasing, costs non-negative and
/// non-decreasing.
class ActionGrid {
 public:
  ActionGrid() = default;
  explicit ActionGrid(std::vector<ActionLevel> actions);

  std::size_t size() const { return actions_.size(); }
  const ActionLevel& operator[](std::size_t i) const { return actions_[i]; }
  const std::vector<ActionLevel>& actions() const { return actions_; }
  /// Index of the action with the given level, or throws std::out_of_range.
  std::size_t index_of(double level) const;

  bool operator==(const ActionGrid&) const = default;

 private:
  std::vector<ActionLevel> actions_;
};

/// Investment-indexed family of loss distributions: row x of the table is P(., x).
class RiskKernel {
 public:
  RiskKernel() = default;
  /// Throws std::invalid_argument listing every malformed row.
  RiskKernel(OutcomeSpace space, ActionGrid actions, Matrix table, bool fosd_monotone = false);

  const OutcomeSpace& space() const { return space_; }
  const ActionGrid& actions() const { return actions_; }
  const Matrix& table() const { return table_; }
  bool flagged_monotone() const { return fosd_monotone_; }

  LossDistribution row(std::size_t action) const;

  bool operator==(const RiskKernel& o) const {
    return space_ == o.space_ && actions_ == o.actions_ && table_.rows() == o.table_.rows() &&
           table_.cols() == o.table_.cols() && table_ == o.table_ &&
           fosd_monotone_ == o.fosd_monotone_;
  }

 private:
  OutcomeSpace space_;
  ActionGrid actions_;
  Matrix table_;
  bool fosd_monotone_ = false;
};

/// Row-level checks for a candidate kernel table; issues are prefixed with "kernel[i]".
ValidationReport validate_kernel_table(const OutcomeSpace& space, const ActionGrid& actions,
                                       const Matrix& table);

/// ok iff every lower-investment row dominates every higher-investment row.
ValidationReport check_kernel_monotone(const RiskKernel& k);

}  // namespace cinsure
