#pragma once

// Evaluation metrics over decision traces, closed-form bounds, and
// normal-approximation confidence intervals.
//
// Pseudo-regret per round r is mu* - sum of the expected instantaneous
// rewards of the round's pulls, where pulling the best arm is worth mu* and
// pulling a suboptimal arm i is worth mu_i - mu* (skips are worth 0). So a
// round costs mu* when the best arm is not pulled, plus gap_i for every
// suboptimal pull. The series is cumulative and nondecreasing.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spnb/bandit_core.hpp"
#include "spnb/seq_adapter.hpp"

namespace spnb {

struct MetricSeries {
  std::string name;
  std::int64_t run_id = 0;
  std::vector<double> values;  // one per round
};

/// Cumulative pseudo-regret per round.
MetricSeries pseudo_regret(const Trace& trace, const ArmSet& arms);
/// Expected regret contribution of a single round with the given pulls.
double round_regret(const ArmSet& arms, std::span<const ArmIndex> pulled);
/// Pulls per round.
MetricSeries npr(const Trace& trace);
/// Pulls of the best arm per round (0 or 1).
MetricSeries pulls_of_best(const Trace& trace, const ArmSet& arms);

/// Share of all pulls that went to the best arm; 0 when nothing was pulled.
double opt_star(const Trace& trace, const ArmSet& arms);
/// Fraction of rounds in which the best arm was pulled.
double opti_star(const Trace& trace, const ArmSet& arms);

/// Misidentification rate of a batch of guesses.
double delta_hat(std::span<const BAIResult> results, const ArmSet& arms);
double delta_hat(std::span<const bool> correct);

double psi_rounds(double rounds_alg, double rounds_ref);
double psi_pulls(double pulls, double rounds);

struct BoundParams {
  std::vector<double> means;
  std::int64_t rounds = 0;  // tau; T = tau * K

  std::size_t arms() const { return means.size(); }
  std::int64_t horizon() const {
    return rounds * static_cast<std::int64_t>(means.size());
  }
};

/// Gaps in increasing order, the best arm taking the smallest suboptimal gap.
std::vector<double> sorted_gaps(std::span<const double> means);
double hardness_h2(std::span<const double> means);

/// Bernoulli KL divergence kl(p, q).
double bernoulli_kl(double p, double q);

/// Naive-adapter bound for a policy with E[T_i] <= C_i ln t + A_i:
/// sum_{i != *} (mu* + gap_i) (C_i ln tau + A_i - C_i K).
double classical_regret_bound(const BoundParams& p, std::span<const double> c,
                              std::span<const double> a);
/// Seq bound with the same constants: sum (gap_i + mu*) (C_i ln T + A_i).
double seq_regret_bound(const BoundParams& p, std::span<const double> c,
                        std::span<const double> a);

/// UCB1 instantiation: C_i = 8 / gap_i^2, A_i = 1 + pi^2 / 3.
double ucb1_regret_bound(const BoundParams& p);

enum class KlMode { kExact, kPinsker };
/// Leading term of the Bayes-UCB / Thompson bounds:
/// sum (1 + eps)(mu* + gap_i) / KL(mu_i, mu*) ln tau, with 1/KL replaced by
/// 1/(2 gap^2) under Pinsker.
double kl_regret_bound(const BoundParams& p, double epsilon, KlMode mode);

/// K(K-1)/2 exp(-(2T - 1) / (2 H2)).
double sr_plus_confidence_bound(const BoundParams& p);
/// K(K-1)/2 exp(-(T - K^2) / (K log_bar(K) H2)).
double sr_confidence_bound(const BoundParams& p);

struct ConfidenceInterval {
  double mean = 0.0;
  /// 1.96 s / sqrt(n); missing for n < 2.
  std::optional<double> halfwidth;
  std::size_t n = 0;

  double lower() const { return mean - halfwidth.value_or(0.0); }
  double upper() const { return mean + halfwidth.value_or(0.0); }
};

ConfidenceInterval aggregate_ci(std::span<const double> samples);

}  // namespace spnb
