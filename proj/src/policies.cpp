#include "spnb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spnb/beta.hpp"

namespace spnb {

PolicyKind parse_policy_kind(std::string_view id) {
  if (id == "ucb1") return PolicyKind::kUcb1;
  if (id == "bayes-ucb") return PolicyKind::kBayesUcb;
  if (id == "thompson") return PolicyKind::kThompson;
  if (id == "ucbe") return PolicyKind::kUcbE;
  throw Error("unknown policy id '" + std::string(id) + "'");
}

std::string_view policy_id(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kUcb1:
      return "ucb1";
    case PolicyKind::kBayesUcb:
      return "bayes-ucb";
    case PolicyKind::kThompson:
      return "thompson";
    case PolicyKind::kUcbE:
      return "ucbe";
  }
  return "?";
}

double hardness_h1(std::span<const double> means) {
  const ArmSet arms = ArmSet::with_tie_break({means.begin(), means.end()});
  const double g_min = arms.min_gap();
  double h1 = 0.0;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const double g = (i == arms.best()) ? g_min : arms.gap(i);
    if (!(g > 0.0)) throw Error("H1 undefined: zero gap on arm " +
                                std::to_string(i));
    h1 += 1.0 / (g * g);
  }
  return h1;
}

double ucbe_exploration(double c, std::int64_t budget, std::size_t arms,
                        double h1) {
  if (!(c > 0.0) || !(h1 > 0.0)) {
    throw Error("UCB-E needs c > 0 and H1 > 0");
  }
  if (budget <= static_cast<std::int64_t>(arms)) {
    throw Error("UCB-E budget must exceed K");
  }
  return c * static_cast<double>(budget - static_cast<std::int64_t>(arms)) / h1;
}

PolicyState::PolicyState(PolicyKind kind, std::size_t arms,
                         PolicyParams params)
    : kind_(kind), params_(params), pulls_(arms, 0), successes_(arms, 0) {
  if (arms < 2) throw Error("policy needs K >= 2");
  if (kind == PolicyKind::kUcbE && !(params_.ucbe_a > 0.0)) {
    throw Error("UCB-E needs exploration constant a > 0");
  }
  if (params_.horizon_pulls < 1) throw Error("horizon_pulls must be positive");
}

bool PolicyState::initialized() const {
  return std::all_of(pulls_.begin(), pulls_.end(),
                     [](std::int64_t t) { return t > 0; });
}

double PolicyState::index(ArmIndex i) const {
  const auto t = static_cast<double>(pulls_.at(i));
  const double mean = static_cast<double>(successes_[i]) / t;
  switch (kind_) {
    case PolicyKind::kUcb1:
      return mean + std::sqrt(2.0 * std::log(static_cast<double>(n_)) / t);
    case PolicyKind::kUcbE:
      return mean + std::sqrt(params_.ucbe_a / t);
    case PolicyKind::kBayesUcb: {
      double scale = static_cast<double>(n_);
      if (params_.bayes_quantile_c != 0.0) {
        scale *= std::pow(std::log(static_cast<double>(params_.horizon_pulls)),
                          params_.bayes_quantile_c);
      }
      const double level = 1.0 - 1.0 / scale;
      if (!(level > 0.0 && level < 1.0)) {
        throw PreconditionError("Bayes-UCB quantile level outside (0, 1)");
      }
      return beta_quantile(alpha(i), beta(i), level);
    }
    case PolicyKind::kThompson:
      break;
  }
  throw PreconditionError("Thompson sampling has no deterministic index");
}

ArmIndex PolicyState::select(RngStream& rng) const {
  if (!initialized()) {
    throw PreconditionError("policy_select before every arm was pulled once");
  }
  ArmIndex best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (ArmIndex i = 0; i < arms(); ++i) {
    const double v = kind_ == PolicyKind::kThompson
                         ? rng.beta(alpha(i), beta(i))
                         : index(i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

void PolicyState::update(ArmIndex i, int x) {
  if (i >= arms()) {
    throw InvalidArmError("policy_update: arm " + std::to_string(i) +
                          " out of range");
  }
  if (x != 0 && x != 1) throw Error("policy_update: feedback must be 0 or 1");
  ++pulls_[i];
  successes_[i] += x;
  ++n_;
}

ArmIndex PolicyState::recommend() const {
  return recommend_best(pulls_, successes_);
}

ArmIndex recommend_best(std::span<const std::int64_t> pulls,
                        std::span<const std::int64_t> successes) {
  ArmIndex best = 0;
  std::int64_t best_successes = 0;
  std::int64_t best_pulls = 0;
  for (ArmIndex i = 0; i < pulls.size(); ++i) {
    if (pulls[i] == 0) continue;
    if (best_pulls == 0) {
      best = i;
      best_successes = successes[i];
      best_pulls = pulls[i];
      continue;
    }
    // S_i/T_i against S_b/T_b, exactly.
    const auto lhs = successes[i] * best_pulls;
    const auto rhs = best_successes * pulls[i];
    if (lhs > rhs || (lhs == rhs && pulls[i] > best_pulls)) {
      best = i;
      best_successes = successes[i];
      best_pulls = pulls[i];
    }
  }
  return best;
}

}  // namespace spnb
