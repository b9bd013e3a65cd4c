#pragma once

#include "cinsure/riskspace.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cinsure {

using Knots = std::vector<std::pair<double, double>>;

/// Disutility over cost: larger cost never lowers disutility.
///
/// Closed forms:
///   linear       u(c) = c
///   exponential  u(c) = (exp(gamma c) - 1) / gamma   (u(0) = 0, u'(0) = 1)
///   power        u(c) = c^eta, c >= 0
///   tabulated    piecewise-linear through the knots, undefined outside them
///
/// A curve is also used as a utility over gains through its gain-equivalent
/// v(z) = -u(-z), which is how the insurer's profit is valued.
class UtilityCurve {
 public:
  enum class Kind { linear, exponential, power, tabulated };

  UtilityCurve() = default;
  static UtilityCurve linear() { return {}; }
  static UtilityCurve exponential(double gamma);
  static UtilityCurve power(double eta);
  static UtilityCurve tabulated(Knots knots);

  Kind kind() const { return kind_; }
  /// gamma for exponential, eta for power, 0 otherwise.
  double parameter() const { return param_; }
  const Knots& knots() const { return knots_; }

  double operator()(double cost) const;
  double derivative(double cost) const;
  double gain(double z) const { return -(*this)(-z); }

  bool operator==(const UtilityCurve&) const = default;

 private:
  Kind kind_ = Kind::linear;
  double param_ = 0.0;
  Knots knots_;
};

/// Probability weighting g: [0,1] -> [0,1], g(0) = 0, g(1) = 1, non-decreasing.
class DistortionFunction {
 public:
  enum class Kind { identity, power, tabulated };

  DistortionFunction() = default;
  static DistortionFunction identity() { return {}; }
  /// g(u) = u^beta
  static DistortionFunction power(double beta);
  static DistortionFunction tabulated(Knots knots);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const Knots& knots() const { return knots_; }

  double operator()(double u) const;

  bool operator==(const DistortionFunction&) const = default;

 private:
  Kind kind_ = Kind::identity;
  double param_ = 1.0;
  Knots knots_;
};

struct Expectation {
  bool operator==(const Expectation&) const = default;
};
struct ExpectedDisutility {
  UtilityCurve curve;
  bool operator==(const ExpectedDisutility&) const = default;
};
struct AVaR {
  double alpha = 1.0;
  bool operator==(const AVaR&) const = default;
};
struct Distortion {
  DistortionFunction g;
  bool operator==(const Distortion&) const = default;
};

using RiskFunctional = std::variant<Expectation, ExpectedDisutility, AVaR, Distortion>;

/// Throws std::invalid_argument when parameters are out of range.
void validate(const RiskFunctional& f);
std::string describe(const RiskFunctional& f);

inline void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("AV@R level must lie in (0, 1], got " + std::to_string(alpha));
}

// AV@R of a cost/loss vector under outcome probabilities. Larger values are worse.
// Both routes take Eigen expressions so that e.g. avar(z1 + z2, p, a) works directly.

/// Mean of the worst alpha-mass of the distribution.
template <typename V, typename P>
typename V::Scalar avar_sorted_tail(const Eigen::DenseBase<V>& values,
                                    const Eigen::DenseBase<P>& probs,
                                    typename V::Scalar alpha) {
  using Scalar = typename V::Scalar;
  require_alpha(static_cast<double>(alpha));
  const VectorX<Scalar> v(values.derived());
  const VectorX<Scalar> p(probs.derived());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v[a] > v[b]; });
  Scalar remaining = alpha;
  Scalar acc(0);
  for (auto i : order) {
    if (remaining <= Scalar(0)) break;
    const Scalar mass = std::min(p[i], remaining);
    acc += mass * v[i];
    remaining -= mass;
  }
  // Rounding can leave a sliver of the tail unfilled; it belongs to the smallest value.
  if (remaining > Scalar(0) && !order.empty()) acc += remaining * v[order.back()];
  return acc / alpha;
}

/// min over t of t + E[(Z - t)^+] / alpha, searched over the support where the optimum lies.
template <typename V, typename P>
typename V::Scalar avar_minimization(const Eigen::DenseBase<V>& values,
                                     const Eigen::DenseBase<P>& probs,
                                     typename V::Scalar alpha) {
  using Scalar = typename V::Scalar;
  require_alpha(static_cast<double>(alpha));
  const VectorX<Scalar> v(values.derived());
  const VectorX<Scalar> p(probs.derived());
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const Scalar t = v[k];
    Scalar excess(0);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] > t) excess += p[i] * (v[i] - t);
    best = std::min(best, t + excess / alpha);
  }
  return best;
}

template <typename Scalar>
Scalar avar(const Distribution<Scalar>& d, Scalar alpha) {
  require_valid(d);
  return avar_sorted_tail(d.values, d.probs, alpha);
}

/// Discrete Choquet integral with distorted decumulative probabilities:
/// v1 + sum_{j>=2} (v_j - v_{j-1}) g(P(Z >= v_j)) over the distinct sorted values.
template <typename Scalar>
Scalar choquet_distortion(const Distribution<Scalar>& d, const DistortionFunction& g) {
  const auto steps = cdf(d);
  // Tail masses accumulated from the top keep P(Z >= v_j) free of 1 - cdf cancellation.
  std::vector<Scalar> tail(steps.size());
  Scalar acc(0);
  for (std::size_t j = steps.size(); j-- > 0;) {
    const Scalar below = j == 0 ? Scalar(0) : steps[j - 1].cumulative;
    acc += steps[j].cumulative - below;
    tail[j] = std::clamp(acc, Scalar(0), Scalar(1));
  }
  Scalar value = steps.front().threshold;
  for (std::size_t j = 1; j < steps.size(); ++j)
    value += (steps[j].threshold - steps[j - 1].threshold) *
             static_cast<Scalar>(g(static_cast<double>(tail[j])));
  return value;
}

/// Values the cost distribution d (larger is worse) under f.
double evaluate_risk(const RiskFunctional& f, const LossDistribution& d);

/// Absolute risk aversion u''(c)/u'(c) of a disutility curve at cost c. This equals the
/// Arrow-Pratt coefficient -v''(z)/v'(z) of the gain-equivalent v at z = -c, so positive
/// means risk-averse. Closed forms are analytic; tabulated curves use central differences
/// with step h and need [c - h, c + h] inside the knots.
double arrow_pratt(const UtilityCurve& u, double cost, double h = 1e-4);

/// Arrow-Pratt coefficient -v''(z)/v'(z) of an arbitrary gain utility by central differences.
double arrow_pratt(const std::function<double(double)>& gain_utility, double z, double h);

}  // namespace cinsure
