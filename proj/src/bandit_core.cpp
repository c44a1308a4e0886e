#include "spnb/bandit_core.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace spnb {

ArmSet::ArmSet(std::vector<double> means) : ArmSet(std::move(means), false) {}

ArmSet ArmSet::with_tie_break(std::vector<double> means) {
  return ArmSet(std::move(means), true);
}

ArmSet::ArmSet(std::vector<double> means, bool allow_tie)
    : means_(std::move(means)) {
  if (means_.size() < 2) {
    throw Error("arm set needs at least 2 arms, got " +
                std::to_string(means_.size()));
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const double m = means_[i];
    if (!(m >= 0.0 && m <= 1.0)) {
      std::ostringstream os;
      os << "mean of arm " << i << " is " << m << ", outside [0, 1]";
      throw Error(os.str());
    }
  }
  best_ = static_cast<ArmIndex>(
      std::max_element(means_.begin(), means_.end()) - means_.begin());
  const auto n_best = std::count(means_.begin(), means_.end(), means_[best_]);
  if (n_best == static_cast<std::ptrdiff_t>(means_.size())) {
    throw Error("all arm means are equal; no unique best arm");
  }
  if (n_best > 1) {
    if (!allow_tie) throw Error("tie for the maximum arm mean");
    tie_ = true;
  }
}

double ArmSet::mean(ArmIndex i) const {
  if (i >= means_.size()) {
    throw InvalidArmError("arm index " + std::to_string(i) +
                          " out of range for K=" +
                          std::to_string(means_.size()));
  }
  return means_[i];
}

double ArmSet::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (i == best_) continue;
    const double d = best_mean() - means_[i];
    if (d > 0.0) g = std::min(g, d);
  }
  return g;
}

RoundClock::RoundClock(std::size_t arms, std::int64_t rounds)
    : arms_(arms), rounds_(rounds) {
  if (arms < 2) throw Error("round clock needs K >= 2");
  if (rounds < 1) throw Error("round clock needs at least one round");
}

RoundClock RoundClock::from_horizon(std::size_t arms, std::int64_t horizon) {
  if (arms == 0 || horizon <= 0 ||
      horizon % static_cast<std::int64_t>(arms) != 0) {
    throw Error("horizon " + std::to_string(horizon) +
                " is not a positive multiple of K=" + std::to_string(arms));
  }
  return RoundClock(arms, horizon / static_cast<std::int64_t>(arms));
}

int sample_feedback(const ArmSet& arms, ArmIndex i, RngStream& rng) {
  return rng.bernoulli(arms.mean(i));
}

TableFeedback::TableFeedback(std::vector<std::vector<int>> table)
    : table_(std::move(table)), cursor_(table_.size(), 0) {}

TableFeedback TableFeedback::draw_table(const ArmSet& arms,
                                        std::size_t per_arm, RngStream& rng) {
  std::vector<std::vector<int>> table(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    table[i].reserve(per_arm);
    for (std::size_t j = 0; j < per_arm; ++j) {
      table[i].push_back(sample_feedback(arms, i, rng));
    }
  }
  return TableFeedback(std::move(table));
}

int TableFeedback::draw(ArmIndex i) {
  if (i >= table_.size()) {
    throw InvalidArmError("arm index " + std::to_string(i) +
                          " out of range for feedback table");
  }
  auto& c = cursor_[i];
  if (c >= table_[i].size()) {
    throw Error("feedback table exhausted for arm " + std::to_string(i));
  }
  return table_[i][c++];
}

}  // namespace spnb
