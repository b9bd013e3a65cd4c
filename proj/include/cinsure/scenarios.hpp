#pragma once

#include "cinsure/contracts.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cinsure {

/// Two outcomes (no breach: loss 0, breach: loss L) over action levels 0..m-1 with the given
/// per-action breach probabilities and investment costs.
Scenario preset_two_point(double loss, const std::vector<double>& breach,
                          const std::vector<double>& costs, RiskFunctional agent = Expectation{},
                          std::string name = "two-point");

/// Ransomware over `units` machines: K ~ Binomial(units, q(x)) disabled machines, loss = ransom * K.
/// units is capped at 64 so binomial coefficients stay exact in double precision.
Scenario preset_ransomware(int units, const std::vector<double>& infection, double ransom,
                           const std::vector<double>& costs, RiskFunctional agent = Expectation{},
                           std::string name = "ransomware");

/// Attacker follower model: efforts a with costs c_A(a), gain G from a breach, and a table of
/// breach probabilities p(x, a) with one row per defender action and one column per effort.
struct StackelbergSpec {
  std::vector<double> effort_costs;
  double gain = 0.0;
  Matrix breach;
};

struct StackelbergKernel {
  RiskKernel kernel;
  std::vector<std::size_t> attacker_response;  // a*(x) per defender action
};

/// Attacker best response a*(x) = argmax_a G p(x,a) - c_A(a), lowest effort on ties; the
/// resulting two-point kernel has breach probability p(x, a*(x)).
StackelbergKernel stackelberg_kernel(const StackelbergSpec& spec, double loss,
                                     const ActionGrid& actions);

/// Malformed or invalid scenario file. `field` names the offending JSON path when known.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)),
        message_(message) {}

  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }

 private:
  std::string field_;
  std::string message_;
};

std::string to_json(const Scenario& s);
/// Parses and validates a scenario document; unknown fields are rejected.
Scenario from_json(const std::string& text);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace cinsure
