#include "fixtures.hpp"

#include <doctest.h>

using namespace cinsure;
using cinsure::testing::random_distribution;
using cinsure::testing::random_simplex;

namespace {

LossDistribution dist(std::initializer_list<double> values, std::initializer_list<double> probs) {
  LossDistribution d;
  d.values = Eigen::Map<const Vector>(values.begin(), static_cast<Eigen::Index>(values.size()));
  d.probs = Eigen::Map<const Vector>(probs.begin(), static_cast<Eigen::Index>(probs.size()));
  return d;
}

}  // namespace

TEST_CASE("evaluate_risk on the basic functionals") {
  const auto d = dist({0, 100}, {0.9, 0.1});
  CHECK(evaluate_risk(Expectation{}, d) == doctest::Approx(10.0));
  CHECK(evaluate_risk(AVaR{1.0}, d) == doctest::Approx(10.0));

  const double expected = (std::exp(1.0) - 1.0) / 0.01;
  CHECK(evaluate_risk(ExpectedDisutility{UtilityCurve::exponential(0.01)}, dist({100}, {1})) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(171.828).epsilon(1e-5));

  CHECK_THROWS_AS(evaluate_risk(AVaR{0.0}, d), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_risk(AVaR{1.5}, d), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_risk(Expectation{}, dist({0, 1}, {0.5, 0.6})), std::invalid_argument);
}

TEST_CASE("avar sorted tail examples") {
  const auto d = dist({0, 100}, {0.9, 0.1});
  CHECK(avar(d, 0.1) == doctest::Approx(100.0));
  CHECK(avar(d, 0.2) == doctest::Approx(50.0));
  CHECK(avar(dist({5}, {1}), 0.3) == doctest::Approx(5.0));
  CHECK(avar(dist({5}, {1}), 1.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(avar(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(avar(d, -0.5), std::invalid_argument);
}

TEST_CASE("avar routes agree and order in alpha on random instances") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_distribution(rng, 8);
    const double a = 0.01 + 0.99 * u(rng);
    const double tail = avar_sorted_tail(d.values, d.probs, a);
    CHECK(std::abs(tail - avar_minimization(d.values, d.probs, a)) <= 1e-9);

    const double b = std::min(1.0, a + 0.3 * u(rng));
    CHECK(avar(d, b) <= tail + 1e-9);
    CHECK(std::abs(avar(d, 1.0) - mean(d)) <= 1e-9);

    // alpha below the mass of the top atom isolates the max loss.
    double top_mass = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (d.values[i] == d.values.maxCoeff()) top_mass += d.probs[i];
    if (top_mass > 1e-6) CHECK(avar(d, top_mass * 0.5) == doctest::Approx(d.values.maxCoeff()));
  }
}

TEST_CASE("avar takes Eigen expressions") {
  const Vector p = Vector::Constant(4, 0.25);
  const Vector z1{{1.0, 2.0, 3.0, 4.0}};
  const Vector z2{{4.0, 0.0, 1.0, 0.0}};
  CHECK(avar_sorted_tail(z1 + z2, p, 0.5) == doctest::Approx(4.5));
  CHECK(avar_sorted_tail(2.0 * z1, p, 0.25) == doctest::Approx(8.0));
  CHECK(avar_minimization(z1.array() + 1.0, p, 0.5) == doctest::Approx(4.5));
}

TEST_CASE("choquet distortion examples") {
  const auto d = dist({0, 100}, {0.5, 0.5});
  CHECK(choquet_distortion(d, DistortionFunction::identity()) == doctest::Approx(50.0));
  CHECK(choquet_distortion(d, DistortionFunction::power(2.0)) == doctest::Approx(25.0));
  CHECK(choquet_distortion(dist({7}, {1}), DistortionFunction::power(0.3)) == doctest::Approx(7.0));
  CHECK(evaluate_risk(Distortion{DistortionFunction::power(2.0)}, d) == doctest::Approx(25.0));

  const auto tab = DistortionFunction::tabulated({{0, 0}, {0.5, 0.8}, {1, 1}});
  CHECK(choquet_distortion(d, tab) == doctest::Approx(80.0));
}

TEST_CASE("choquet and expected-disutility reduce to the expectation") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_distribution(rng, 8);
    const double m = mean(d);
    CHECK(std::abs(choquet_distortion(d, DistortionFunction::identity()) - m) <= 1e-9);
    CHECK(std::abs(evaluate_risk(ExpectedDisutility{UtilityCurve::linear()}, d) - m) <= 1e-9);
    const double v = choquet_distortion(d, DistortionFunction::power(u(rng)));
    CHECK(v >= d.values.minCoeff() - 1e-9);
    CHECK(v <= d.values.maxCoeff() + 1e-9);
  }
}

TEST_CASE("avar coherency axioms on a shared probability space") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> atoms(1, 8);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = atoms(rng);
    const Vector p = random_simplex(rng, n, 0.1);
    const Vector z1 = 100.0 * Vector::NullaryExpr(n, [&] { return u(rng) - 0.3; });
    const Vector z2 = 100.0 * Vector::NullaryExpr(n, [&] { return u(rng) - 0.3; });
    const double a = 0.01 + 0.99 * u(rng);
    const double base = avar_sorted_tail(z1, p, a);

    const Vector bigger = z1 + 50.0 * Vector::NullaryExpr(n, [&] { return u(rng); });
    CHECK(base <= avar_sorted_tail(bigger, p, a) + 1e-9);
    const double c = 200.0 * (u(rng) - 0.5);
    CHECK(std::abs(avar_sorted_tail(z1.array() + c, p, a) - (base + c)) <= 1e-9);
    const double lambda = 5.0 * u(rng);
    CHECK(std::abs(avar_sorted_tail(lambda * z1, p, a) - lambda * base) <= 1e-9);
    CHECK(avar_sorted_tail(z1 + z2, p, a) <= base + avar_sorted_tail(z2, p, a) + 1e-9);
  }
}

TEST_CASE("utility curves") {
  const auto e = UtilityCurve::exponential(0.5);
  CHECK(e(0.0) == 0.0);
  CHECK(e.derivative(0.0) == doctest::Approx(1.0));
  CHECK(e.gain(2.0) == doctest::Approx(-(std::exp(-1.0) - 1.0) / 0.5));
  CHECK(UtilityCurve::power(2.0)(3.0) == doctest::Approx(9.0));
  CHECK_THROWS_AS(UtilityCurve::power(2.0)(-1.0), std::domain_error);

  const auto t = UtilityCurve::tabulated({{0, 0}, {10, 10}, {20, 40}});
  CHECK(t(5) == doctest::Approx(5));
  CHECK(t(15) == doctest::Approx(25));
  CHECK(t.derivative(15) == doctest::Approx(3));
  CHECK_THROWS_AS(t(25), std::domain_error);

  CHECK_THROWS_AS(UtilityCurve::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilityCurve::power(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilityCurve::tabulated({{0, 0}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(UtilityCurve::tabulated({{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(DistortionFunction::tabulated({{0, 0.1}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(DistortionFunction::power(0.0), std::invalid_argument);
}

TEST_CASE("arrow_pratt coefficients") {
  CHECK(arrow_pratt(UtilityCurve::exponential(0.5), 3.0) == doctest::Approx(0.5));
  CHECK(arrow_pratt(UtilityCurve::exponential(0.5), -7.0) == doctest::Approx(0.5));
  CHECK(arrow_pratt(UtilityCurve::linear(), 42.0) == 0.0);
  CHECK(arrow_pratt(UtilityCurve::power(2.0), 4.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(arrow_pratt(UtilityCurve::power(2.0), 0.0), std::domain_error);

  // Quadratic gain utility z - 0.01 z^2 at z = 10: u'' = -0.02, u' = 0.8.
  const auto quadratic = [](double z) { return z - 0.01 * z * z; };
  CHECK(arrow_pratt(quadratic, 10.0, 1e-3) == doctest::Approx(0.025).epsilon(1e-6));

  // Tabulated convex disutility: kink at 10 shows up as positive aversion.
  const auto t = UtilityCurve::tabulated({{0, 0}, {10, 10}, {20, 40}});
  CHECK(arrow_pratt(t, 5.0, 1.0) == doctest::Approx(0.0));
  CHECK(arrow_pratt(t, 10.0, 1.0) > 0.0);
  CHECK_THROWS_AS(arrow_pratt(t, 19.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(arrow_pratt(UtilityCurve::tabulated({{0, 1}, {10, 1}}), 5.0, 1.0),
                  std::domain_error);
}
