#pragma once

// Batch execution: n seeded independent runs per (scenario, algorithm),
// per-run metrics, and CSV persistence.
//
// Run i uses seed base_seed + i. Each run derives its feedback, policy and
// instance streams from that seed, so results do not depend on execution
// order. run_batch_serial is the reference loop; run_batch fans the same
// tasks out over OpenMP threads and must produce identical output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spnb/bandit_core.hpp"
#include "spnb/policies.hpp"
#include "spnb/seq_adapter.hpp"

namespace spnb {

enum class Adapter { kNaive, kSeq, kSeqLimitedPulls, kSeqLimitedRounds,
                     kUcbRevPlus, kSrPlus };

struct AlgorithmSpec {
  std::string id;
  Adapter adapter = Adapter::kNaive;
  PolicyKind kind = PolicyKind::kUcb1;
};

/// Known ids: ucb1, bayes-ucb, thompson, ucbe (naive adapter); the same
/// prefixed with "seq-" (Seq over the whole horizon); seq-ucbe-lp,
/// seq-ucbe-lr; ucbrev-plus; sr-plus.
AlgorithmSpec parse_algorithm(const std::string& id);
std::vector<std::string> known_algorithms();

struct ScenarioInfo {
  std::string id;
  std::string description;
};
std::vector<ScenarioInfo> list_scenarios();

struct ExperimentConfig {
  std::string scenario = "synthetic-rm";
  std::vector<std::string> policies;
  std::size_t k = 0;          // 0: scenario default
  std::int64_t tau = 0;       // 0: scenario default
  std::int64_t runs = 1;
  std::uint64_t seed = 0;
  std::string data_path;
  double gamma = 60.0;
  double ucbe_c = 2.0;
  double bayes_quantile_c = 0.0;
  double min_gap = 0.1;
  std::optional<double> h1;   // required for UCB-E on loaded data
  bool keep_series = true;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical JSON form.
  std::uint64_t fingerprint() const;
  void validate() const;
};

/// The arm set and horizon one run plays on.
struct Instance {
  ArmSet arms;
  std::int64_t rounds;
};

/// Instances are fixed per scenario except synthetic-rm, which draws a new
/// one for every run seed.
Instance make_instance(const ExperimentConfig& config, std::uint64_t run_seed);

struct RunResult {
  std::string scenario;
  std::string algorithm;
  std::int64_t run = 0;
  std::uint64_t seed = 0;
  // Per round; empty when keep_series is off.
  std::vector<double> pseudo_regret;
  std::vector<double> npr;
  std::vector<double> pulls_of_opt;
  BAIResult bai;
  bool correct = false;
  ArmIndex best_arm = 0;
  double final_regret = 0.0;
  double opt_star = 0.0;
  double opti_star = 0.0;
  std::int64_t rounds = 0;
  double seconds = 0.0;
  /// Set when the run threw; metric fields are then meaningless.
  std::optional<std::string> error;
};

/// One run of one algorithm; never throws (errors land in RunResult::error).
RunResult run_single(const ExperimentConfig& config,
                     const AlgorithmSpec& algorithm, std::int64_t run_index);

struct BatchResult {
  ExperimentConfig config;
  std::uint64_t fingerprint = 0;
  /// Sorted by (algorithm order in config, run).
  std::vector<RunResult> runs;

  std::vector<const RunResult*> failures() const;
  std::vector<const RunResult*> of(const std::string& algorithm) const;
};

BatchResult run_batch_serial(const ExperimentConfig& config);
/// threads <= 0 uses the OpenMP default.
BatchResult run_batch(const ExperimentConfig& config, int threads = 0);

struct OutputFiles {
  std::filesystem::path rounds_csv;
  std::filesystem::path bai_csv;
  std::filesystem::path meta_json;
};

/// Writes <scenario>_rounds.csv, <scenario>_bai.csv and <scenario>_meta.json.
OutputFiles write_results_csv(const BatchResult& batch,
                              const std::filesystem::path& out_dir);

struct RoundRow {
  std::string scenario;
  std::string algorithm;
  std::int64_t run = 0;
  std::int64_t round = 0;
  double pseudo_regret = 0.0;
  double npr = 0.0;
  double pulls_of_opt = 0.0;
};
std::vector<RoundRow> read_rounds_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace spnb
