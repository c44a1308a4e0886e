#include "spnb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spnb/elimination.hpp"

namespace spnb {

namespace {

void check_trace(const Trace& trace, const ArmSet* arms) {
  if (arms != nullptr && trace.arms != arms->size()) {
    throw Error("trace K does not match arm set");
  }
  if (static_cast<std::int64_t>(trace.steps.size()) !=
      trace.rounds * static_cast<std::int64_t>(trace.arms)) {
    throw Error("trace does not cover the horizon");
  }
}

std::vector<double> suboptimal_gaps(const BoundParams& p) {
  const ArmSet arms(p.means);
  std::vector<double> g;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (i == arms.best()) continue;
    const double d = arms.gap(i);
    if (!(d > 0.0)) throw Error("bound undefined: zero gap on arm " +
                                std::to_string(i));
    g.push_back(d);
  }
  return g;
}

}  // namespace

double round_regret(const ArmSet& arms, std::span<const ArmIndex> pulled) {
  double r = arms.best_mean();
  for (ArmIndex i : pulled) {
    if (i == arms.best()) {
      r -= arms.best_mean();
    } else {
      r += arms.gap(i);
    }
  }
  return r;
}

MetricSeries pseudo_regret(const Trace& trace, const ArmSet& arms) {
  check_trace(trace, &arms);
  MetricSeries out{"pseudo_regret", 0, {}};
  out.values.reserve(static_cast<std::size_t>(trace.rounds));
  double cum = 0.0;
  std::vector<ArmIndex> pulled;
  for (std::int64_t r = 0; r < trace.rounds; ++r) {
    pulled.clear();
    const auto base = static_cast<std::size_t>(r) * trace.arms;
    for (std::size_t s = 0; s < trace.arms; ++s) {
      const auto& step = trace.steps[base + s];
      if (step.pulled()) pulled.push_back(step.offered);
    }
    cum += round_regret(arms, pulled);
    out.values.push_back(cum);
  }
  return out;
}

MetricSeries npr(const Trace& trace) {
  check_trace(trace, nullptr);
  MetricSeries out{"npr", 0, std::vector<double>(trace.rounds, 0.0)};
  for (const auto& step : trace.steps) {
    if (step.pulled()) out.values[static_cast<std::size_t>(step.round)] += 1.0;
  }
  return out;
}

MetricSeries pulls_of_best(const Trace& trace, const ArmSet& arms) {
  check_trace(trace, &arms);
  MetricSeries out{"pulls_of_opt", 0, std::vector<double>(trace.rounds, 0.0)};
  for (const auto& step : trace.steps) {
    if (step.pulled() && step.offered == arms.best()) {
      out.values[static_cast<std::size_t>(step.round)] += 1.0;
    }
  }
  return out;
}

double opt_star(const Trace& trace, const ArmSet& arms) {
  std::int64_t best = 0;
  std::int64_t total = 0;
  for (const auto& step : trace.steps) {
    if (!step.pulled()) continue;
    ++total;
    if (step.offered == arms.best()) ++best;
  }
  return total == 0 ? 0.0
                    : static_cast<double>(best) / static_cast<double>(total);
}

double opti_star(const Trace& trace, const ArmSet& arms) {
  const auto s = pulls_of_best(trace, arms);
  double rounds_with_best = 0.0;
  for (double v : s.values) rounds_with_best += v > 0.0 ? 1.0 : 0.0;
  return rounds_with_best / static_cast<double>(trace.rounds);
}

double delta_hat(std::span<const BAIResult> results, const ArmSet& arms) {
  if (results.empty()) throw Error("delta_hat of an empty batch");
  std::size_t wrong = 0;
  for (const auto& r : results) wrong += r.guess != arms.best() ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(results.size());
}

double delta_hat(std::span<const bool> correct) {
  if (correct.empty()) throw Error("delta_hat of an empty batch");
  const auto ok = std::count(correct.begin(), correct.end(), true);
  return 1.0 - static_cast<double>(ok) / static_cast<double>(correct.size());
}

double psi_rounds(double rounds_alg, double rounds_ref) {
  if (!(rounds_ref > 0.0)) throw Error("psi_rounds: reference must be > 0");
  return (rounds_alg - rounds_ref) / rounds_ref;
}

double psi_pulls(double pulls, double rounds) {
  if (!(rounds > 0.0)) throw Error("psi_pulls: rounds must be > 0");
  return (pulls - rounds) / rounds;
}

std::vector<double> sorted_gaps(std::span<const double> means) {
  const ArmSet arms({means.begin(), means.end()});
  std::vector<double> g;
  g.reserve(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    g.push_back(i == arms.best() ? arms.min_gap() : arms.gap(i));
  }
  std::sort(g.begin(), g.end());
  return g;
}

double hardness_h2(std::span<const double> means) {
  const auto g = sorted_gaps(means);
  double h2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0)) throw Error("H2 undefined: zero gap");
    h2 = std::max(h2, static_cast<double>(i + 1) / (g[i] * g[i]));
  }
  return h2;
}

double bernoulli_kl(double p, double q) {
  auto term = [](double a, double b) {
    return a == 0.0 ? 0.0 : a * std::log(a / b);
  };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

double classical_regret_bound(const BoundParams& p, std::span<const double> c,
                              std::span<const double> a) {
  const auto gaps = suboptimal_gaps(p);
  if (c.size() != gaps.size() || a.size() != gaps.size()) {
    throw Error("bound constants must have one entry per suboptimal arm");
  }
  const ArmSet arms(p.means);
  const double k = static_cast<double>(p.arms());
  const double log_tau = std::log(static_cast<double>(p.rounds));
  double sum = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    sum += (arms.best_mean() + gaps[i]) * (c[i] * log_tau + a[i] - c[i] * k);
  }
  return sum;
}

double seq_regret_bound(const BoundParams& p, std::span<const double> c,
                        std::span<const double> a) {
  const auto gaps = suboptimal_gaps(p);
  if (c.size() != gaps.size() || a.size() != gaps.size()) {
    throw Error("bound constants must have one entry per suboptimal arm");
  }
  const ArmSet arms(p.means);
  const double log_t = std::log(static_cast<double>(p.horizon()));
  double sum = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    sum += (gaps[i] + arms.best_mean()) * (c[i] * log_t + a[i]);
  }
  return sum;
}

double ucb1_regret_bound(const BoundParams& p) {
  const auto gaps = suboptimal_gaps(p);
  std::vector<double> c;
  std::vector<double> a;
  for (double g : gaps) {
    c.push_back(8.0 / (g * g));
    a.push_back(1.0 + std::numbers::pi * std::numbers::pi / 3.0);
  }
  return classical_regret_bound(p, c, a);
}

double kl_regret_bound(const BoundParams& p, double epsilon, KlMode mode) {
  const ArmSet arms(p.means);
  const auto gaps = suboptimal_gaps(p);
  const double log_tau = std::log(static_cast<double>(p.rounds));
  double sum = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (i == arms.best()) continue;
    const double g = gaps[j++];
    const double inv_kl = mode == KlMode::kPinsker
                              ? 1.0 / (2.0 * g * g)
                              : 1.0 / bernoulli_kl(arms.mean(i), arms.best_mean());
    sum += (1.0 + epsilon) * (arms.best_mean() + g) * inv_kl * log_tau;
  }
  return sum;
}

double sr_plus_confidence_bound(const BoundParams& p) {
  const double k = static_cast<double>(p.arms());
  const double t = static_cast<double>(p.horizon());
  return k * (k - 1.0) / 2.0 *
         std::exp(-(2.0 * t - 1.0) / (2.0 * hardness_h2(p.means)));
}

double sr_confidence_bound(const BoundParams& p) {
  const double k = static_cast<double>(p.arms());
  const double t = static_cast<double>(p.horizon());
  return k * (k - 1.0) / 2.0 *
         std::exp(-(t - k * k) / (k * log_bar(p.arms()) * hardness_h2(p.means)));
}

ConfidenceInterval aggregate_ci(std::span<const double> samples) {
  ConfidenceInterval ci;
  ci.n = samples.size();
  if (samples.empty()) throw Error("aggregate_ci of no samples");
  double sum = 0.0;
  for (double x : samples) sum += x;
  ci.mean = sum / static_cast<double>(ci.n);
  if (ci.n < 2) return ci;
  double ss = 0.0;
  for (double x : samples) ss += (x - ci.mean) * (x - ci.mean);
  const double sd = std::sqrt(ss / static_cast<double>(ci.n - 1));
  ci.halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(ci.n));
  return ci;
}

}  // namespace spnb
