// spnb: run pull/no-pull bandit experiments and evaluate closed-form bounds.
//
//   spnb run --config <path> --out <dir> [--threads N] [--seed S]
//   spnb list-scenarios
//   spnb bound --scenario <id> --policy <id> [--tau N] [--k N] [--seed S]
//
// SPNB_THREADS and SPNB_SEED override the thread count and base seed when
// the corresponding flag is absent.

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spnb/elimination.hpp"
#include "spnb/metrics.hpp"
#include "spnb/policies.hpp"
#include "spnb/runner.hpp"

namespace {

template <typename T>
std::optional<T> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string s(v);
    const auto n = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(name);
    return static_cast<T>(n);
  } catch (const std::exception&) {
    throw spnb::Error(std::string("invalid value for ") + name + ": '" + v + "'");
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<int> threads, std::optional<std::uint64_t> seed) {
  auto config = spnb::ExperimentConfig::load(config_path);
  if (!seed) seed = env_number<std::uint64_t>("SPNB_SEED");
  if (seed) config.seed = *seed;
  if (!threads) threads = env_number<int>("SPNB_THREADS");

  const auto batch = spnb::run_batch(config, threads.value_or(0));
  const auto files = spnb::write_results_csv(batch, out_dir);

  for (const auto& algo : config.policies) {
    std::vector<double> regret;
    std::vector<double> correct;
    for (const auto* r : batch.of(algo)) {
      if (r->error) continue;
      regret.push_back(r->final_regret);
      correct.push_back(r->correct ? 1.0 : 0.0);
    }
    if (regret.empty()) continue;
    const auto ci = spnb::aggregate_ci(regret);
    std::cout << std::left << std::setw(16) << algo << " regret "
              << std::setprecision(6) << ci.mean << " +- "
              << ci.halfwidth.value_or(0.0) << "  delta_hat "
              << 1.0 - spnb::aggregate_ci(correct).mean << '\n';
  }
  std::cout << "wrote " << files.rounds_csv.string() << '\n'
            << "wrote " << files.bai_csv.string() << '\n'
            << "wrote " << files.meta_json.string() << '\n';

  const auto failures = batch.failures();
  for (const auto* r : failures) {
    std::cerr << "error: " << r->algorithm << " run " << r->run << ": "
              << *r->error << '\n';
  }
  return failures.empty() ? 0 : 1;
}

int cmd_list() {
  for (const auto& s : spnb::list_scenarios()) {
    std::cout << std::left << std::setw(14) << s.id << ' ' << s.description
              << '\n';
  }
  std::cout << "\nalgorithms:";
  for (const auto& a : spnb::known_algorithms()) std::cout << ' ' << a;
  std::cout << '\n';
  return 0;
}

int cmd_bound(const std::string& scenario, const std::string& policy,
              std::int64_t tau, std::size_t k, std::uint64_t seed,
              const std::string& data, double gamma, double epsilon) {
  spnb::ExperimentConfig c;
  c.scenario = scenario;
  c.policies = {"ucb1"};
  c.tau = tau;
  c.k = k;
  c.seed = seed;
  c.data_path = data;
  c.gamma = gamma;
  c.validate();
  const auto inst = spnb::make_instance(c, seed);
  const spnb::BoundParams p{{inst.arms.means().begin(), inst.arms.means().end()},
                            inst.rounds};

  std::cout << std::setprecision(10);
  std::cout << "scenario " << scenario << "\nK " << p.arms() << "\ntau "
            << p.rounds << "\nT " << p.horizon() << "\nH1 "
            << spnb::hardness_h1(p.means) << "\nH2 "
            << spnb::hardness_h2(p.means) << '\n';
  if (policy == "ucb1") {
    std::vector<double> cs;
    std::vector<double> as;
    for (std::size_t i = 0; i < p.arms(); ++i) {
      if (i == inst.arms.best()) continue;
      const double g = inst.arms.gap(i);
      cs.push_back(8.0 / (g * g));
      as.push_back(1.0 + std::numbers::pi * std::numbers::pi / 3.0);
    }
    std::cout << "ucb1_regret_bound " << spnb::ucb1_regret_bound(p) << '\n'
              << "seq_ucb1_regret_bound " << spnb::seq_regret_bound(p, cs, as)
              << '\n';
  } else if (policy == "bayes-ucb" || policy == "thompson") {
    std::cout << "kl_regret_bound " << spnb::kl_regret_bound(p, epsilon, spnb::KlMode::kExact)
              << '\n'
              << "pinsker_regret_bound "
              << spnb::kl_regret_bound(p, epsilon, spnb::KlMode::kPinsker) << '\n';
  } else if (policy == "sr-plus" || policy == "sr") {
    std::cout << "sr_plus_confidence_bound " << spnb::sr_plus_confidence_bound(p)
              << '\n'
              << "sr_confidence_bound " << spnb::sr_confidence_bound(p) << '\n'
              << "log_bar " << spnb::log_bar(p.arms()) << '\n';
  } else {
    throw spnb::Error("no closed-form bound for policy '" + policy +
                      "' (use ucb1, bayes-ucb, thompson, sr, sr-plus)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential pull/no-pull bandit experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a batch described by a JSON config");
  std::string config_path;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  run->add_option("--config", config_path, "config JSON")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (env SPNB_THREADS)");
  run->add_option("--seed", seed, "base seed (env SPNB_SEED)");

  app.add_subcommand("list-scenarios", "list built-in scenarios");

  auto* bound = app.add_subcommand("bound", "print closed-form bound values");
  std::string scenario;
  std::string policy;
  std::int64_t tau = 0;
  std::size_t k = 0;
  std::uint64_t bound_seed = 0;
  std::string data;
  double gamma = 60.0;
  double epsilon = 0.0;
  bound->add_option("--scenario", scenario, "scenario id")->required();
  bound->add_option("--policy", policy, "ucb1, bayes-ucb, thompson, sr, sr-plus")
      ->required();
  bound->add_option("--tau", tau, "rounds (default: scenario)");
  bound->add_option("--k", k, "arms for synthetic-rm");
  bound->add_option("--seed", bound_seed, "instance seed for synthetic-rm");
  bound->add_option("--data", data, "CSV for slot-means / exceedance");
  bound->add_option("--gamma", gamma, "exceedance threshold");
  bound->add_option("--epsilon", epsilon, "epsilon of the KL bounds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, threads, seed);
    if (bound->parsed()) {
      return cmd_bound(scenario, policy, tau, k, bound_seed, data, gamma, epsilon);
    }
    return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
