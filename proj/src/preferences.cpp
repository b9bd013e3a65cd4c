#include "cinsure/preferences.hpp"

#include <cmath>

namespace cinsure {

namespace {

void check_knots(const Knots& knots, const char* what) {
  if (knots.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
      throw std::invalid_argument(std::string(what) + ": non-finite knot");
    if (i > 0 && !(knots[i].first > knots[i - 1].first))
      throw std::invalid_argument(std::string(what) + ": knot abscissae must be strictly increasing");
    if (i > 0 && knots[i].second < knots[i - 1].second)
      throw std::invalid_argument(std::string(what) + ": knot values must be non-decreasing");
  }
}

// Index of the segment containing x; x must lie within the knots.
std::size_t segment(const Knots& knots, double x) {
  if (x < knots.front().first || x > knots.back().first)
    throw std::domain_error("point " + std::to_string(x) + " outside tabulated knots [" +
                            std::to_string(knots.front().first) + ", " +
                            std::to_string(knots.back().first) + "]");
  std::size_t i = 1;
  while (i + 1 < knots.size() && x >= knots[i].first) ++i;
  return i - 1;
}

double interpolate(const Knots& knots, double x) {
  const auto i = segment(knots, x);
  const auto [x0, y0] = knots[i];
  const auto [x1, y1] = knots[i + 1];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

UtilityCurve UtilityCurve::exponential(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("exponential curve needs gamma > 0");
  UtilityCurve u;
  u.kind_ = Kind::exponential;
  u.param_ = gamma;
  return u;
}

UtilityCurve UtilityCurve::power(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("power curve needs eta > 0");
  UtilityCurve u;
  u.kind_ = Kind::power;
  u.param_ = eta;
  return u;
}

UtilityCurve UtilityCurve::tabulated(Knots knots) {
  check_knots(knots, "tabulated utility");
  UtilityCurve u;
  u.kind_ = Kind::tabulated;
  u.knots_ = std::move(knots);
  return u;
}

double UtilityCurve::operator()(double c) const {
  switch (kind_) {
    case Kind::linear:
      return c;
    case Kind::exponential:
      return std::expm1(param_ * c) / param_;
    case Kind::power:
      if (c < 0.0) throw std::domain_error("power curve is defined for non-negative costs only");
      return std::pow(c, param_);
    case Kind::tabulated:
      return interpolate(knots_, c);
  }
  return c;
}

double UtilityCurve::derivative(double c) const {
  switch (kind_) {
    case Kind::linear:
      return 1.0;
    case Kind::exponential:
      return std::exp(param_ * c);
    case Kind::power:
      if (c < 0.0) throw std::domain_error("power curve is defined for non-negative costs only");
      return param_ * std::pow(c, param_ - 1.0);
    case Kind::tabulated: {
      const auto i = segment(knots_, c);
      return (knots_[i + 1].second - knots_[i].second) / (knots_[i + 1].first - knots_[i].first);
    }
  }
  return 1.0;
}

DistortionFunction DistortionFunction::power(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("power distortion needs beta > 0");
  DistortionFunction g;
  g.kind_ = Kind::power;
  g.param_ = beta;
  return g;
}

DistortionFunction DistortionFunction::tabulated(Knots knots) {
  check_knots(knots, "tabulated distortion");
  if (knots.front() != std::pair{0.0, 0.0} || knots.back() != std::pair{1.0, 1.0})
    throw std::invalid_argument("tabulated distortion must start at (0,0) and end at (1,1)");
  DistortionFunction g;
  g.kind_ = Kind::tabulated;
  g.knots_ = std::move(knots);
  return g;
}

double DistortionFunction::operator()(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case Kind::identity:
      return u;
    case Kind::power:
      return std::pow(u, param_);
    case Kind::tabulated:
      return interpolate(knots_, u);
  }
  return u;
}

void validate(const RiskFunctional& f) {
  if (const auto* a = std::get_if<AVaR>(&f)) require_alpha(a->alpha);
  // Curves and distortions validate on construction.
}

std::string describe(const RiskFunctional& f) {
  struct {
    std::string operator()(const Expectation&) const { return "expectation"; }
    std::string operator()(const ExpectedDisutility& e) const {
      switch (e.curve.kind()) {
        case UtilityCurve::Kind::linear:
          return "expected-disutility(linear)";
        case UtilityCurve::Kind::exponential:
          return "expected-disutility(exponential " + std::to_string(e.curve.parameter()) + ")";
        case UtilityCurve::Kind::power:
          return "expected-disutility(power " + std::to_string(e.curve.parameter()) + ")";
        case UtilityCurve::Kind::tabulated:
          return "expected-disutility(tabulated)";
      }
      return "expected-disutility";
    }
    std::string operator()(const AVaR& a) const { return "avar(" + std::to_string(a.alpha) + ")"; }
    std::string operator()(const Distortion& d) const {
      switch (d.g.kind()) {
        case DistortionFunction::Kind::identity:
          return "distortion(identity)";
        case DistortionFunction::Kind::power:
          return "distortion(power " + std::to_string(d.g.parameter()) + ")";
        case DistortionFunction::Kind::tabulated:
          return "distortion(tabulated)";
      }
      return "distortion";
    }
  } visitor;
  return std::visit(visitor, f);
}

double evaluate_risk(const RiskFunctional& f, const LossDistribution& d) {
  validate(f);
  require_valid(d);
  struct {
    const LossDistribution& d;
    double operator()(const Expectation&) const { return mean(d); }
    double operator()(const ExpectedDisutility& e) const {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < d.size(); ++i) acc += d.probs[i] * e.curve(d.values[i]);
      return acc;
    }
    double operator()(const AVaR& a) const { return avar(d, a.alpha); }
    double operator()(const Distortion& g) const { return choquet_distortion(d, g.g); }
  } visitor{d};
  return std::visit(visitor, f);
}

double arrow_pratt(const UtilityCurve& u, double cost, double h) {
  switch (u.kind()) {
    case UtilityCurve::Kind::linear:
      return 0.0;
    case UtilityCurve::Kind::exponential:
      return u.parameter();
    case UtilityCurve::Kind::power:
      if (!(cost > 0.0)) throw std::domain_error("power curve coefficient needs cost > 0");
      return (u.parameter() - 1.0) / cost;
    case UtilityCurve::Kind::tabulated:
      break;
  }
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const auto& k = u.knots();
  if (cost - h < k.front().first || cost + h > k.back().first)
    throw std::domain_error("cost " + std::to_string(cost) + " not interior to tabulated knots");
  // In gain coordinates z = -c: -v''(z)/v'(z) = u''(c)/u'(c).
  return arrow_pratt([&u](double z) { return u.gain(z); }, -cost, h);
}

double arrow_pratt(const std::function<double(double)>& v, double z, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double up = v(z + h), mid = v(z), down = v(z - h);
  const double first = (up - down) / (2.0 * h);
  const double second = (up - 2.0 * mid + down) / (h * h);
  if (first == 0.0) throw std::domain_error("utility has zero slope at " + std::to_string(z));
  return -second / first;
}

}  // namespace cinsure
