#include "spnb/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spnb {

double log_bar(std::size_t arms) {
  if (arms < 2) throw Error("log_bar needs K >= 2");
  double s = 0.5;
  for (std::size_t i = 2; i <= arms; ++i) s += 1.0 / static_cast<double>(i);
  return s;
}

std::vector<std::int64_t> sr_checkpoints(std::size_t arms,
                                         std::int64_t rounds) {
  if (rounds <= static_cast<std::int64_t>(arms)) {
    throw Error("SR+ needs tau > K");
  }
  const double lb = log_bar(arms);
  const auto k_arms = static_cast<std::int64_t>(arms);
  std::vector<std::int64_t> out;
  out.reserve(arms - 1);
  for (std::int64_t k = 1; k < k_arms; ++k) {
    const double v = static_cast<double>(rounds - k_arms) /
                     (lb * static_cast<double>(k_arms + 1 - k));
    out.push_back(static_cast<std::int64_t>(std::ceil(v)));
  }
  return out;
}

std::int64_t ucbrev_checkpoint(std::int64_t rounds, double delta_tilde) {
  const double d2 = delta_tilde * delta_tilde;
  const double arg = static_cast<double>(rounds) * d2;
  if (arg <= 1.0) return 1;
  const double v = std::ceil(2.0 * std::log(arg) / d2);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(v));
}

double ucbrev_radius(std::int64_t t, double delta_tilde) {
  const double td = static_cast<double>(t) * delta_tilde * delta_tilde;
  const double num = td > 1.0 ? std::log(td) : 0.0;
  return std::sqrt(num / (2.0 * static_cast<double>(t)));
}

EliminationState::EliminationState(std::size_t arms)
    : pulls(arms, 0), successes(arms, 0) {
  surviving.resize(arms);
  for (std::size_t i = 0; i < arms; ++i) surviving[i] = i;
}

double EliminationState::empirical_mean(ArmIndex i) const {
  if (pulls[i] == 0) return 0.0;
  return static_cast<double>(successes[i]) / static_cast<double>(pulls[i]);
}

bool EliminationState::alive(ArmIndex i) const {
  return std::find(surviving.begin(), surviving.end(), i) != surviving.end();
}

namespace {

// Pull every surviving arm at its slot in this round.
void pull_round(EliminationState& st, const RoundClock& clock,
                FeedbackSource& feedback, detail::TraceWriter& w) {
  std::size_t next = 0;
  for (ArmIndex slot = 0; slot < clock.arms(); ++slot) {
    if (next < st.surviving.size() && st.surviving[next] == slot) {
      const int x = feedback.draw(slot);
      ++st.pulls[slot];
      st.successes[slot] += x;
      w.pull(x);
      ++next;
    } else {
      w.skip();
    }
  }
}

BAIResult finish(const EliminationState& st, const Trace& trace,
                 const RoundClock& clock, BaiMode mode) {
  BAIResult r;
  r.mode = mode;
  r.rounds_used = clock.rounds();
  r.pulls_used = trace.total_pulls();
  std::vector<std::int64_t> p(st.pulls.size(), 0);
  std::vector<std::int64_t> s(st.pulls.size(), 0);
  for (ArmIndex i : st.surviving) {
    p[i] = st.pulls[i];
    s[i] = st.successes[i];
  }
  r.guess = recommend_best(p, s);
  return r;
}

}  // namespace

EliminationRun run_sr_plus_traced(const Environment& env,
                                  FeedbackSource& feedback,
                                  std::uint64_t seed) {
  const RoundClock& clock = env.clock;
  EliminationState st(clock.arms());
  st.checkpoints = sr_checkpoints(clock.arms(), clock.rounds());
  detail::TraceWriter w(clock, seed);
  std::size_t k = 0;
  for (std::int64_t t = 1; t <= clock.rounds(); ++t) {
    pull_round(st, clock, feedback, w);
    while (k < st.checkpoints.size() && st.checkpoints[k] <= t) {
      // Lowest empirical mean; ties go to the lowest index.
      auto worst = st.surviving.begin();
      for (auto it = st.surviving.begin(); it != st.surviving.end(); ++it) {
        if (st.empirical_mean(*it) < st.empirical_mean(*worst)) worst = it;
      }
      st.surviving.erase(worst);
      st.elimination_rounds.push_back(t);
      ++k;
      st.phase = static_cast<int>(k);
    }
  }
  Trace trace = w.take();
  BAIResult bai = finish(st, trace, clock, BaiMode::kSrPlus);
  return EliminationRun{std::move(trace), bai, std::move(st)};
}

EliminationRun run_ucbrev_plus_traced(const Environment& env,
                                      FeedbackSource& feedback,
                                      std::uint64_t seed) {
  const RoundClock& clock = env.clock;
  EliminationState st(clock.arms());
  detail::TraceWriter w(clock, seed);
  std::int64_t next_check = ucbrev_checkpoint(clock.rounds(), st.delta_tilde);
  for (std::int64_t t = 1; t <= clock.rounds(); ++t) {
    // Surviving arms have t - 1 pulls here; a check needs at least one.
    if (st.surviving.size() > 1 && t >= next_check && t > 1) {
      st.checkpoints.push_back(t);
      const double rad = ucbrev_radius(t, st.delta_tilde);
      double best_lower = -std::numeric_limits<double>::infinity();
      for (ArmIndex i : st.surviving) {
        best_lower = std::max(best_lower, st.empirical_mean(i) - rad);
      }
      const auto before = st.surviving.size();
      std::erase_if(st.surviving, [&](ArmIndex i) {
        return st.empirical_mean(i) + rad < best_lower;
      });
      if (st.surviving.size() < before) st.elimination_rounds.push_back(t);
      ++st.phase;
      st.delta_tilde *= 0.5;
      next_check = ucbrev_checkpoint(clock.rounds(), st.delta_tilde);
    }
    pull_round(st, clock, feedback, w);
  }
  Trace trace = w.take();
  BAIResult bai = finish(st, trace, clock, BaiMode::kUcbRevPlus);
  return EliminationRun{std::move(trace), bai, std::move(st)};
}

BAIResult run_sr_plus(const Environment& env, RngStream& rng) {
  LazyFeedback fb(env.arms, rng);
  return run_sr_plus_traced(env, fb, rng.seed()).bai;
}

Trace run_ucbrev_plus(const Environment& env, RngStream& rng) {
  LazyFeedback fb(env.arms, rng);
  return run_ucbrev_plus_traced(env, fb, rng.seed()).trace;
}

}  // namespace spnb
