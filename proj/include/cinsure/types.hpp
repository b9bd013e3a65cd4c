#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace cinsure {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vector = VectorX<double>;
using Matrix = Eigen::MatrixXd;

// Absolute tolerances shared across modules.
inline constexpr double kProbTol = 1e-12;  // probability sums and CDF values
inline constexpr double kCostTol = 1e-9;   // cost/objective comparisons and ties

/// Report-style validation result: empty means ok.
struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  void add(std::string issue) { issues.push_back(std::move(issue)); }
  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& i : other.issues) issues.push_back(prefix + i);
  }
  std::string str() const {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += "; ";
      out += i;
    }
    return out;
  }
};

}  // namespace cinsure
