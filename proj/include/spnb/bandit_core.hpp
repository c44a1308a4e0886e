#pragma once

// Arms, the round clock of the pull/no-pull setting, and Bernoulli feedback.
//
// Time steps and arm indices are 0-based. Round r covers time steps
// r*K .. r*K + K - 1 and offers arm (t mod K) at step t, so every round
// presents each arm exactly once in slot order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spnb/rng.hpp"

namespace spnb {

using ArmIndex = std::size_t;
using TimeStep = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArmError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ArmSet {
 public:
  /// Rejects K < 2, means outside [0, 1] and ties for the maximum.
  explicit ArmSet(std::vector<double> means);

  /// Same validation, but ties for the maximum are broken toward the lowest
  /// index and recorded in has_tie(). All-equal means are still rejected.
  static ArmSet with_tie_break(std::vector<double> means);

  std::size_t size() const { return means_.size(); }
  double mean(ArmIndex i) const;
  std::span<const double> means() const { return means_; }

  ArmIndex best() const { return best_; }
  double best_mean() const { return means_[best_]; }
  /// mu* - mu_i.
  double gap(ArmIndex i) const { return best_mean() - mean(i); }
  /// Smallest gap over suboptimal arms.
  double min_gap() const;
  bool has_tie() const { return tie_; }

 private:
  ArmSet(std::vector<double> means, bool allow_tie);

  std::vector<double> means_;
  ArmIndex best_ = 0;
  bool tie_ = false;
};

class RoundClock {
 public:
  RoundClock(std::size_t arms, std::int64_t rounds);
  /// Throws unless horizon is a positive multiple of arms.
  static RoundClock from_horizon(std::size_t arms, std::int64_t horizon);

  std::size_t arms() const { return arms_; }
  std::int64_t rounds() const { return rounds_; }
  TimeStep horizon() const { return rounds_ * static_cast<TimeStep>(arms_); }

  std::int64_t round_of(TimeStep t) const {
    return t / static_cast<TimeStep>(arms_);
  }
  ArmIndex slot_of(TimeStep t) const {
    return static_cast<ArmIndex>(t % static_cast<TimeStep>(arms_));
  }

 private:
  std::size_t arms_;
  std::int64_t rounds_;
};

/// Arm offered at time step t.
constexpr ArmIndex offered_arm(TimeStep t, std::size_t arms) {
  return static_cast<ArmIndex>(t % static_cast<TimeStep>(arms));
}

/// One Bernoulli draw from arm i; advances rng by exactly one uniform.
int sample_feedback(const ArmSet& arms, ArmIndex i, RngStream& rng);

/// Arms, clock and the mapping between them.
struct Environment {
  ArmSet arms;
  RoundClock clock;

  Environment(ArmSet a, std::int64_t rounds)
      : arms(std::move(a)), clock(arms.size(), rounds) {}
};

/// Source of pull outcomes. The adapters ask for the next outcome of arm i.
class FeedbackSource {
 public:
  virtual ~FeedbackSource() = default;
  virtual int draw(ArmIndex i) = 0;
};

/// Draws lazily from the run's stream at pull time.
class LazyFeedback final : public FeedbackSource {
 public:
  LazyFeedback(const ArmSet& arms, RngStream& rng) : arms_(arms), rng_(rng) {}
  int draw(ArmIndex i) override { return sample_feedback(arms_, i, rng_); }

 private:
  const ArmSet& arms_;
  RngStream& rng_;
};

/// Replays a pre-drawn table indexed by (arm, per-arm pull count).
class TableFeedback final : public FeedbackSource {
 public:
  explicit TableFeedback(std::vector<std::vector<int>> table);
  /// Pre-draws `per_arm` outcomes for every arm, arm-major.
  static TableFeedback draw_table(const ArmSet& arms, std::size_t per_arm,
                                  RngStream& rng);

  int draw(ArmIndex i) override;
  const std::vector<std::vector<int>>& table() const { return table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<std::size_t> cursor_;
};

}  // namespace spnb
