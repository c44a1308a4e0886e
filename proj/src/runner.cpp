#include "spnb/runner.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "spnb/elimination.hpp"
#include "spnb/experiments.hpp"
#include "spnb/metrics.hpp"

namespace spnb {

using nlohmann::json;

namespace {

constexpr std::string_view kSeqPrefix = "seq-";

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

int audibert_id(const std::string& scenario) {
  constexpr std::string_view kPrefix = "audibert-";
  if (!starts_with(scenario, kPrefix)) return 0;
  const auto rest = std::string_view(scenario).substr(kPrefix.size());
  int id = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), id);
  if (ec != std::errc() || ptr != rest.data() + rest.size()) return -1;
  return id;
}

}  // namespace

AlgorithmSpec parse_algorithm(const std::string& id) {
  AlgorithmSpec spec;
  spec.id = id;
  if (id == "ucbrev-plus") {
    spec.adapter = Adapter::kUcbRevPlus;
  } else if (id == "sr-plus") {
    spec.adapter = Adapter::kSrPlus;
  } else if (id == "seq-ucbe-lp") {
    spec.adapter = Adapter::kSeqLimitedPulls;
    spec.kind = PolicyKind::kUcbE;
  } else if (id == "seq-ucbe-lr") {
    spec.adapter = Adapter::kSeqLimitedRounds;
    spec.kind = PolicyKind::kUcbE;
  } else if (starts_with(id, kSeqPrefix)) {
    spec.adapter = Adapter::kSeq;
    spec.kind = parse_policy_kind(std::string_view(id).substr(kSeqPrefix.size()));
  } else {
    spec.adapter = Adapter::kNaive;
    spec.kind = parse_policy_kind(id);
  }
  return spec;
}

std::vector<std::string> known_algorithms() {
  return {"ucb1",        "bayes-ucb",   "thompson",       "ucbe",
          "seq-ucb1",    "seq-bayes-ucb", "seq-thompson", "seq-ucbe",
          "seq-ucbe-lp", "seq-ucbe-lr", "ucbrev-plus",    "sr-plus"};
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  out.push_back({"synthetic-rm",
                 "uniform means with best-arm lead of exactly min_gap; a new "
                 "instance per run (k, tau default 25, 1000)"});
  for (int id = 1; id <= 7; ++id) {
    const auto arms = audibert_experiment(id);
    std::ostringstream os;
    os << "best-arm suite " << id << ": K=" << arms.size()
       << ", default tau " << audibert_budget(id);
    out.push_back({"audibert-" + std::to_string(id), os.str()});
  }
  out.push_back({"slot-means", "slot,mean CSV from data_path (tau default 730)"});
  out.push_back({"exceedance",
                 "day,slot,concentration CSV from data_path reduced at gamma "
                 "(tau default 494)"});
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.scenario = j.at("scenario").get<std::string>();
    c.policies = j.at("policies").get<std::vector<std::string>>();
    c.k = j.value("k", std::size_t{0});
    c.tau = j.value("tau", std::int64_t{0});
    c.runs = j.value("runs", std::int64_t{1});
    c.seed = j.value("seed", std::uint64_t{0});
    c.data_path = j.value("data_path", std::string{});
    c.gamma = j.value("gamma", 60.0);
    c.ucbe_c = j.value("ucbe_c", 2.0);
    c.bayes_quantile_c = j.value("bayes_quantile_c", 0.0);
    c.min_gap = j.value("min_gap", 0.1);
    if (j.contains("h1") && !j.at("h1").is_null()) c.h1 = j.at("h1").get<double>();
    c.keep_series = j.value("keep_series", true);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  auto c = from_json(j);
  // Relative data paths are resolved against the config file.
  if (!c.data_path.empty() && std::filesystem::path(c.data_path).is_relative()) {
    c.data_path = (path.parent_path() / c.data_path).lexically_normal().string();
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["policies"] = policies;
  j["k"] = k;
  j["tau"] = tau;
  j["runs"] = runs;
  j["seed"] = seed;
  j["data_path"] = data_path;
  j["gamma"] = gamma;
  j["ucbe_c"] = ucbe_c;
  j["bayes_quantile_c"] = bayes_quantile_c;
  j["min_gap"] = min_gap;
  j["h1"] = h1 ? json(*h1) : json(nullptr);
  j["keep_series"] = keep_series;
  return j;
}

std::uint64_t ExperimentConfig::fingerprint() const {
  const std::string s = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw Error("config: runs must be >= 1");
  if (policies.empty()) throw Error("config: policies[] is empty");
  for (const auto& p : policies) parse_algorithm(p);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      if (policies[i] == policies[j]) {
        throw Error("config: duplicate algorithm '" + policies[i] + "'");
      }
    }
  }
  if (tau < 0) throw Error("config: tau must be positive");
  const int aid = audibert_id(scenario);
  if (aid != 0) {
    audibert_experiment(aid);
  } else if (scenario == "synthetic-rm") {
    if (k == 1) throw Error("config: k must be >= 2");
  } else if (scenario == "slot-means" || scenario == "exceedance") {
    if (data_path.empty()) throw Error("config: " + scenario + " needs data_path");
  } else {
    throw Error("config: unknown scenario '" + scenario + "'");
  }
}

Instance make_instance(const ExperimentConfig& config, std::uint64_t run_seed) {
  const int aid = audibert_id(config.scenario);
  if (aid > 0) {
    return Instance{audibert_experiment(aid),
                    config.tau > 0 ? config.tau : audibert_budget(aid)};
  }
  if (config.scenario == "synthetic-rm") {
    RngStream rng(run_seed, StreamId::kInstance);
    const std::size_t k = config.k > 0 ? config.k : 25;
    return Instance{gen_synthetic_rm(k, config.min_gap, rng),
                    config.tau > 0 ? config.tau : 1000};
  }
  if (config.scenario == "slot-means") {
    return Instance{load_slot_means_csv(config.data_path).arms,
                    config.tau > 0 ? config.tau : 730};
  }
  if (config.scenario == "exceedance") {
    return Instance{load_exceedance_csv(config.data_path, config.gamma).arms,
                    config.tau > 0 ? config.tau : 494};
  }
  throw Error("unknown scenario '" + config.scenario + "'");
}

namespace {

bool per_run_instance(const ExperimentConfig& c) {
  return c.scenario == "synthetic-rm";
}

PolicyParams make_params(const ExperimentConfig& config,
                         const AlgorithmSpec& algo, const Instance& inst) {
  PolicyParams p;
  p.ucbe_c = config.ucbe_c;
  p.bayes_quantile_c = config.bayes_quantile_c;
  const auto k = static_cast<std::int64_t>(inst.arms.size());
  p.horizon_pulls = algo.adapter == Adapter::kNaive ? inst.rounds : inst.rounds * k;
  if (algo.kind == PolicyKind::kUcbE) {
    const bool loaded =
        config.scenario == "slot-means" || config.scenario == "exceedance";
    double h1 = 0.0;
    if (loaded) {
      if (!config.h1) throw Error("UCB-E on loaded data needs h1 in the config");
      h1 = *config.h1;
    } else {
      h1 = hardness_h1(inst.arms.means());
    }
    // The naive adapter's pull budget is tau; Seq variants share it.
    p.ucbe_a = ucbe_exploration(config.ucbe_c, inst.rounds, inst.arms.size(), h1);
  }
  return p;
}

RunOutcome execute(const AlgorithmSpec& algo, const PolicyParams& params,
                   const Instance& inst, std::uint64_t seed) {
  RngStream fb_rng(seed, StreamId::kFeedback);
  RngStream policy_rng(seed, StreamId::kPolicy);
  LazyFeedback fb(inst.arms, fb_rng);
  const Environment env(inst.arms, inst.rounds);
  switch (algo.adapter) {
    case Adapter::kNaive: {
      PolicyState p(algo.kind, inst.arms.size(), params);
      return run_naive_bai(p, env.clock, fb, policy_rng, seed);
    }
    case Adapter::kSeq:
    case Adapter::kSeqLimitedRounds: {
      PolicyState p(algo.kind, inst.arms.size(), params);
      return run_seq_limited_rounds(p, env.clock, fb, policy_rng, seed);
    }
    case Adapter::kSeqLimitedPulls: {
      PolicyState p(algo.kind, inst.arms.size(), params);
      return run_seq_limited_pulls(p, env.clock, inst.rounds, fb, policy_rng,
                                   seed);
    }
    case Adapter::kUcbRevPlus: {
      auto run = run_ucbrev_plus_traced(env, fb, seed);
      return RunOutcome{std::move(run.trace), run.bai};
    }
    case Adapter::kSrPlus: {
      auto run = run_sr_plus_traced(env, fb, seed);
      return RunOutcome{std::move(run.trace), run.bai};
    }
  }
  throw Error("unhandled adapter");
}

RunResult run_on_instance(const ExperimentConfig& config,
                          const AlgorithmSpec& algo, const Instance& inst,
                          std::int64_t run_index, std::uint64_t fingerprint) {
  RunResult r;
  r.scenario = config.scenario;
  r.algorithm = algo.id;
  r.run = run_index;
  r.seed = config.seed + static_cast<std::uint64_t>(run_index);
  r.rounds = inst.rounds;
  r.best_arm = inst.arms.best();
  const auto start = std::chrono::steady_clock::now();
  try {
    const PolicyParams params = make_params(config, algo, inst);
    RunOutcome out = execute(algo, params, inst, r.seed);
    out.trace.config_fingerprint = fingerprint;
    auto regret = pseudo_regret(out.trace, inst.arms);
    r.final_regret = regret.values.back();
    r.opt_star = opt_star(out.trace, inst.arms);
    r.opti_star = opti_star(out.trace, inst.arms);
    r.bai = out.bai;
    r.correct = out.bai.guess == inst.arms.best();
    if (config.keep_series) {
      r.pseudo_regret = std::move(regret.values);
      r.npr = npr(out.trace).values;
      r.pulls_of_opt = pulls_of_best(out.trace, inst.arms).values;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  } catch (...) {
    r.error = "unknown error";
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  return r;
}

RunResult run_task(const ExperimentConfig& config,
                   const std::vector<AlgorithmSpec>& algos,
                   const std::optional<Instance>& shared, std::int64_t task,
                   std::uint64_t fingerprint) {
  const auto a = static_cast<std::size_t>(task / config.runs);
  const std::int64_t run = task % config.runs;
  if (shared) return run_on_instance(config, algos[a], *shared, run, fingerprint);
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(run);
  try {
    const Instance inst = make_instance(config, seed);
    return run_on_instance(config, algos[a], inst, run, fingerprint);
  } catch (const std::exception& e) {
    RunResult r;
    r.scenario = config.scenario;
    r.algorithm = algos[a].id;
    r.run = run;
    r.seed = seed;
    r.error = e.what();
    return r;
  }
}

struct BatchPlan {
  std::vector<AlgorithmSpec> algos;
  std::optional<Instance> shared;
  std::int64_t tasks = 0;
};

BatchPlan plan(const ExperimentConfig& config) {
  config.validate();
  BatchPlan p;
  for (const auto& id : config.policies) p.algos.push_back(parse_algorithm(id));
  // Loading errors for fixed instances abort the batch up front.
  if (!per_run_instance(config)) p.shared = make_instance(config, config.seed);
  p.tasks = static_cast<std::int64_t>(p.algos.size()) * config.runs;
  return p;
}

}  // namespace

RunResult run_single(const ExperimentConfig& config,
                     const AlgorithmSpec& algorithm, std::int64_t run_index) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(run_index);
  try {
    const Instance inst = make_instance(config, seed);
    return run_on_instance(config, algorithm, inst, run_index,
                           config.fingerprint());
  } catch (const std::exception& e) {
    RunResult r;
    r.scenario = config.scenario;
    r.algorithm = algorithm.id;
    r.run = run_index;
    r.seed = seed;
    r.error = e.what();
    return r;
  }
}

BatchResult run_batch_serial(const ExperimentConfig& config) {
  const BatchPlan p = plan(config);
  BatchResult out{config, config.fingerprint(), {}};
  out.runs.reserve(static_cast<std::size_t>(p.tasks));
  for (std::int64_t task = 0; task < p.tasks; ++task) {
    out.runs.push_back(run_task(config, p.algos, p.shared, task, out.fingerprint));
  }
  return out;
}

BatchResult run_batch(const ExperimentConfig& config, int threads) {
  const BatchPlan p = plan(config);
  BatchResult out{config, config.fingerprint(), {}};
  out.runs.resize(static_cast<std::size_t>(p.tasks));
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  const std::uint64_t fp = out.fingerprint;
#pragma omp parallel for schedule(dynamic, 1) num_threads(n_threads)
  for (std::int64_t task = 0; task < p.tasks; ++task) {
    out.runs[static_cast<std::size_t>(task)] =
        run_task(config, p.algos, p.shared, task, fp);
  }
  return out;
}

std::vector<const RunResult*> BatchResult::failures() const {
  std::vector<const RunResult*> f;
  for (const auto& r : runs) {
    if (r.error) f.push_back(&r);
  }
  return f;
}

std::vector<const RunResult*> BatchResult::of(const std::string& algorithm) const {
  std::vector<const RunResult*> f;
  for (const auto& r : runs) {
    if (r.algorithm == algorithm) f.push_back(&r);
  }
  return f;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, ptr);
}

OutputFiles write_results_csv(const BatchResult& batch,
                              const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

  const std::string& sc = batch.config.scenario;
  OutputFiles files{out_dir / (sc + "_rounds.csv"), out_dir / (sc + "_bai.csv"),
                    out_dir / (sc + "_meta.json")};
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + p.string());
    return f;
  };

  {
    auto f = open(files.rounds_csv);
    f << "scenario,algorithm,run,round,pseudo_regret,npr,pulls_of_opt\n";
    for (const auto& r : batch.runs) {
      if (r.error) continue;
      for (std::size_t i = 0; i < r.pseudo_regret.size(); ++i) {
        f << r.scenario << ',' << r.algorithm << ',' << r.run << ',' << i + 1
          << ',' << format_double(r.pseudo_regret[i]) << ','
          << format_double(r.npr[i]) << ','
          << format_double(r.pulls_of_opt[i]) << '\n';
      }
    }
    if (!f) throw Error("write failed: " + files.rounds_csv.string());
  }
  {
    auto f = open(files.bai_csv);
    f << "scenario,algorithm,run,guess,correct,rounds_used,pulls_used\n";
    for (const auto& r : batch.runs) {
      if (r.error) continue;
      f << r.scenario << ',' << r.algorithm << ',' << r.run << ','
        << r.bai.guess << ',' << (r.correct ? 1 : 0) << ','
        << r.bai.rounds_used << ',' << r.bai.pulls_used << '\n';
    }
    if (!f) throw Error("write failed: " + files.bai_csv.string());
  }
  {
    json meta;
    char fp[17];
    std::snprintf(fp, sizeof fp, "%016llx",
                  static_cast<unsigned long long>(batch.fingerprint));
    meta["config_fingerprint"] = fp;
    meta["config"] = batch.config.to_json();
    meta["seed_rule"] = "run seed = seed + run";
    json failures = json::array();
    for (const auto* r : batch.failures()) {
      failures.push_back({{"algorithm", r->algorithm},
                          {"run", r->run},
                          {"error", *r->error}});
    }
    meta["failures"] = failures;
    if (!per_run_instance(batch.config)) {
      const auto inst = make_instance(batch.config, batch.config.seed);
      meta["means"] = std::vector<double>(inst.arms.means().begin(),
                                          inst.arms.means().end());
      meta["best_arm"] = inst.arms.best();
      meta["tie_broken"] = inst.arms.has_tie();
      meta["rounds"] = inst.rounds;
    }
    auto f = open(files.meta_json);
    f << meta.dump(2) << '\n';
    if (!f) throw Error("write failed: " + files.meta_json.string());
  }
  return files;
}

std::vector<RoundRow> read_rounds_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "scenario,algorithm,run,round,pseudo_regret,npr,pulls_of_opt") {
    throw Error(path.string() + ": unexpected header");
  }
  std::vector<RoundRow> rows;
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      const auto pos = rest.find(',');
      cols.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (cols.size() != 7) {
      throw Error(path.string() + ":" + std::to_string(no) + ": malformed row");
    }
    RoundRow r;
    r.scenario = cols[0];
    r.algorithm = cols[1];
    auto num = [&](std::string_view s, auto& v) {
      const auto [p, e] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (e != std::errc() || p != s.data() + s.size()) {
        throw Error(path.string() + ":" + std::to_string(no) + ": bad number");
      }
    };
    num(cols[2], r.run);
    num(cols[3], r.round);
    num(cols[4], r.pseudo_regret);
    num(cols[5], r.npr);
    num(cols[6], r.pulls_of_opt);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace spnb
