#pragma once

// Classical index policies behind one interface: select() the next arm from
// the current statistics, update() with an observed outcome.

#include <concepts>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "spnb/bandit_core.hpp"
#include "spnb/rng.hpp"

namespace spnb {

enum class PolicyKind { kUcb1, kBayesUcb, kThompson, kUcbE };

/// "ucb1", "bayes-ucb", "thompson", "ucbe".
PolicyKind parse_policy_kind(std::string_view id);
std::string_view policy_id(PolicyKind kind);

struct PolicyParams {
  double ucbe_c = 2.0;
  /// Exploration constant a of UCB-E; see ucbe_exploration().
  double ucbe_a = 0.0;
  /// Bayes-UCB level is 1 - 1 / (n * ln(horizon_pulls)^c).
  double bayes_quantile_c = 0.0;
  std::int64_t horizon_pulls = 1;
};

/// H1 = sum_i gap_i^-2, with the best arm's gap set to the smallest
/// suboptimal gap.
double hardness_h1(std::span<const double> means);

/// a = c * (budget - K) / H1.
double ucbe_exploration(double c, std::int64_t budget, std::size_t arms,
                        double h1);

/// Requirements the adapters place on a policy. Policies that need each arm
/// pulled once before index selection report needs_init().
template <typename P>
concept BanditPolicy = requires(P p, const P cp, RngStream& rng, ArmIndex i,
                                int x) {
  { p.select(rng) } -> std::convertible_to<ArmIndex>;
  p.update(i, x);
  { cp.needs_init() } -> std::convertible_to<bool>;
  { cp.arms() } -> std::convertible_to<std::size_t>;
  { cp.recommend() } -> std::convertible_to<ArmIndex>;
};

class PolicyState {
 public:
  PolicyState(PolicyKind kind, std::size_t arms, PolicyParams params = {});

  PolicyKind kind() const { return kind_; }
  const PolicyParams& params() const { return params_; }
  std::size_t arms() const { return pulls_.size(); }
  std::int64_t total_pulls() const { return n_; }
  std::int64_t pulls(ArmIndex i) const { return pulls_.at(i); }
  std::int64_t successes(ArmIndex i) const { return successes_.at(i); }
  std::span<const std::int64_t> pulls() const { return pulls_; }
  std::span<const std::int64_t> successes() const { return successes_; }

  /// Beta posterior under a uniform prior.
  double alpha(ArmIndex i) const { return 1.0 + successes_.at(i); }
  double beta(ArmIndex i) const {
    return 1.0 + static_cast<double>(pulls_.at(i) - successes_.at(i));
  }

  bool needs_init() const { return true; }
  bool initialized() const;

  /// Index-based choice; lowest index wins ties. Only Thompson draws from
  /// rng. Throws PreconditionError until every arm has one pull.
  ArmIndex select(RngStream& rng) const;
  void update(ArmIndex i, int x);
  /// Highest empirical mean; ties to more pulls, then lower index.
  ArmIndex recommend() const;

  /// Index value of arm i (UCB1, UCB-E, Bayes-UCB only).
  double index(ArmIndex i) const;

 private:
  PolicyKind kind_;
  PolicyParams params_;
  std::vector<std::int64_t> pulls_;
  std::vector<std::int64_t> successes_;
  std::int64_t n_ = 0;
};

static_assert(BanditPolicy<PolicyState>);

// Free-function forms.
inline ArmIndex policy_select(const PolicyState& s, RngStream& rng) {
  return s.select(rng);
}
inline void policy_update(PolicyState& s, ArmIndex i, int x) { s.update(i, x); }
inline ArmIndex recommend_best(const PolicyState& s) { return s.recommend(); }

/// Argmax of S_i / T_i; ties to larger T_i, then lower index.
ArmIndex recommend_best(std::span<const std::int64_t> pulls,
                        std::span<const std::int64_t> successes);

}  // namespace spnb
