#include "cinsure/riskspace.hpp"

#include <set>

namespace cinsure {

OutcomeSpace::OutcomeSpace(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw std::invalid_argument("outcome space needs at least one outcome");
  std::set<std::string> labels;
  losses_.resize(static_cast<Eigen::Index>(outcomes_.size()));
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    const auto& o = outcomes_[i];
    if (!std::isfinite(o.loss) || o.loss < 0.0)
      throw std::invalid_argument("outcomes[" + std::to_string(i) +
                                  "].loss must be finite and non-negative");
    if (!labels.insert(o.label).second)
      throw std::invalid_argument("duplicate outcome label '" + o.label + "'");
    losses_[static_cast<Eigen::Index>(i)] = o.loss;
  }
}

ActionGrid::ActionGrid(std::vector<ActionLevel> actions) : actions_(std::move(actions)) {
  if (actions_.empty()) throw std::invalid_argument("action grid must be non-empty");
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    const auto& a = actions_[i];
    const std::string at = "actions[" + std::to_string(i) + "]";
    if (!std::isfinite(a.level)) throw std::invalid_argument(at + ".level must be finite");
    if (!std::isfinite(a.cost) || a.cost < 0.0)
      throw std::invalid_argument(at + ".cost must be finite and non-negative");
    if (i > 0 && !(a.level > actions_[i - 1].level))
      throw std::invalid_argument(at + ".level must be strictly increasing");
    if (i > 0 && a.cost < actions_[i - 1].cost)
      throw std::invalid_argument(at + ".cost must be non-decreasing");
  }
}

std::size_t ActionGrid::index_of(double level) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i].level == level) return i;
  throw std::out_of_range("action level " + std::to_string(level) + " not in grid");
}

ValidationReport validate_kernel_table(const OutcomeSpace& space, const ActionGrid& actions,
                                       const Matrix& table) {
  ValidationReport report;
  if (static_cast<std::size_t>(table.rows()) != actions.size())
    report.add("kernel: expected " + std::to_string(actions.size()) + " rows, got " +
               std::to_string(table.rows()));
  if (static_cast<std::size_t>(table.cols()) != space.size()) {
    report.add("kernel: expected " + std::to_string(space.size()) + " columns, got " +
               std::to_string(table.cols()));
    return report;
  }
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    report.merge(validate_distribution(space, table.row(r).transpose()),
                 "kernel[" + std::to_string(r) + "]: ");
  return report;
}

RiskKernel::RiskKernel(OutcomeSpace space, ActionGrid actions, Matrix table, bool fosd_monotone)
    : space_(std::move(space)),
      actions_(std::move(actions)),
      table_(std::move(table)),
      fosd_monotone_(fosd_monotone) {
  auto report = validate_kernel_table(space_, actions_, table_);
  if (!report.ok()) throw std::invalid_argument(report.str());
  if (fosd_monotone_) {
    auto mono = check_kernel_monotone(*this);
    if (!mono.ok()) throw std::invalid_argument("kernel flagged monotone: " + mono.str());
  }
}

LossDistribution RiskKernel::row(std::size_t action) const {
  if (action >= actions_.size()) throw std::out_of_range("action index out of range");
  return make_distribution(space_, table_.row(static_cast<Eigen::Index>(action)).transpose());
}

ValidationReport check_kernel_monotone(const RiskKernel& k) {
  ValidationReport report;
  const std::size_t n = k.actions().size();
  std::vector<LossDistribution> rows;
  rows.reserve(n);
  for (std::size_t x = 0; x < n; ++x) rows.push_back(k.row(x));
  for (std::size_t lo = 0; lo < n; ++lo)
    for (std::size_t hi = lo + 1; hi < n; ++hi)
      if (!fosd_dominates(rows[lo], rows[hi]))
        report.add("not FOSD-monotone at pair (" + std::to_string(lo) + "," +
                   std::to_string(hi) + ")");
  return report;
}

}  // namespace cinsure
