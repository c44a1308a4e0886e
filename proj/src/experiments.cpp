#include "spnb/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

namespace spnb {

LoadError::LoadError(const std::filesystem::path& path, std::size_t line,
                     const std::string& what)
    : Error(path.string() + (line > 0 ? ":" + std::to_string(line) : "") +
            ": " + what),
      line_(line) {}

ArmSet gen_synthetic_rm(std::size_t arms, double min_gap, RngStream& rng,
                        std::size_t max_attempts) {
  if (arms < 2) throw Error("synthetic instance needs K >= 2");
  if (!(min_gap > 0.0 && min_gap < 1.0)) {
    throw Error("min_gap must lie in (0, 1)");
  }
  std::vector<double> means(arms);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (auto& m : means) m = rng.uniform();
    const auto best = static_cast<std::size_t>(
        std::max_element(means.begin(), means.end()) - means.begin());
    std::size_t runner_up = best == 0 ? 1 : 0;
    for (std::size_t i = 0; i < arms; ++i) {
      if (i != best && means[i] > means[runner_up]) runner_up = i;
    }
    if (means[best] - means[runner_up] < min_gap) continue;
    means[runner_up] = means[best] - min_gap;
    return ArmSet(means);
  }
  std::ostringstream os;
  os << "gen_synthetic_rm: no instance with K=" << arms
     << " and min gap " << min_gap << " after " << max_attempts
     << " attempts";
  throw Error(os.str());
}

ArmSet audibert_experiment(int id) {
  std::vector<double> m{0.5};
  auto fill = [&m](std::size_t count, double v) { m.insert(m.end(), count, v); };
  switch (id) {
    case 1:
      fill(19, 0.4);
      break;
    case 2:
      fill(5, 0.42);
      fill(14, 0.38);
      break;
    case 3:
      for (int i = 2; i <= 4; ++i) m.push_back(0.5 - std::pow(0.37, i));
      break;
    case 4:
      m.push_back(0.42);
      fill(2, 0.4);
      fill(2, 0.35);
      break;
    case 5:
      for (int i = 2; i <= 15; ++i) m.push_back(0.5 - 0.025 * i);
      break;
    case 6:
      m.push_back(0.48);
      fill(18, 0.37);
      break;
    case 7:
      fill(5, 0.45);
      fill(14, 0.43);
      fill(10, 0.38);
      break;
    default:
      throw Error("unknown best-arm experiment id " + std::to_string(id) +
                  " (expected 1..7)");
  }
  return ArmSet(m);
}

std::int64_t audibert_budget(int id) {
  static constexpr std::int64_t kBudget[] = {2000, 2000, 2000, 600,
                                             4000, 6000, 6000};
  if (id < 1 || id > 7) {
    throw Error("unknown best-arm experiment id " + std::to_string(id));
  }
  return kBudget[id - 1];
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

struct CsvFile {
  std::vector<std::string> header;
  // (line number, raw line)
  std::vector<std::pair<std::size_t, std::string>> rows;
};

CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path, 0, "cannot open file");
  CsvFile f;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    if (f.header.empty()) {
      for (auto h : split(line)) f.header.emplace_back(h);
      continue;
    }
    f.rows.emplace_back(no, line);
  }
  if (f.header.empty()) throw LoadError(path, 0, "empty file");
  if (f.rows.empty()) throw LoadError(path, 0, "no data rows");
  return f;
}

ArmSet make_loaded_arms(std::vector<double> means,
                        const std::filesystem::path& path) {
  try {
    ArmSet arms = ArmSet::with_tie_break(std::move(means));
    if (arms.has_tie()) {
      std::cerr << "warning: " << path.string()
                << ": tie for the best mean, using the lowest index ("
                << arms.best() << ")\n";
    }
    return arms;
  } catch (const LoadError&) {
    throw;
  } catch (const Error& e) {
    throw LoadError(path, 0, e.what());
  }
}

SlotMeans parse_slot_means(const std::filesystem::path& path,
                           const CsvFile& f) {
  if (f.header != std::vector<std::string>{"slot", "mean"}) {
    throw LoadError(path, 1, "expected header 'slot,mean'");
  }
  std::vector<std::string> labels;
  std::vector<double> means;
  std::set<std::string> seen;
  for (const auto& [no, raw] : f.rows) {
    const auto cols = split(raw);
    if (cols.size() != 2 || cols[0].empty()) {
      throw LoadError(path, no, "malformed row");
    }
    const auto m = parse_number<double>(cols[1]);
    if (!m) throw LoadError(path, no, "mean is not a number");
    if (!(*m >= 0.0 && *m <= 1.0)) {
      throw LoadError(path, no, "mean outside [0, 1]");
    }
    if (!seen.emplace(cols[0]).second) {
      throw LoadError(path, no, "duplicate slot '" + std::string(cols[0]) + "'");
    }
    labels.emplace_back(cols[0]);
    means.push_back(*m);
  }
  if (means.size() < 2) throw LoadError(path, 0, "need at least 2 slots");
  return SlotMeans{std::move(labels), make_loaded_arms(std::move(means), path)};
}

}  // namespace

SlotMeans load_slot_means_csv(const std::filesystem::path& path) {
  return parse_slot_means(path, read_csv(path));
}

ExceedanceData load_exceedance_csv(const std::filesystem::path& path,
                                   double gamma) {
  const CsvFile f = read_csv(path);
  if (f.header == std::vector<std::string>{"slot", "mean"}) {
    auto sm = parse_slot_means(path, f);
    const std::size_t k = sm.arms.size();
    return ExceedanceData{std::move(sm.arms), 0,
                          std::vector<std::int64_t>(k, 0)};
  }
  if (f.header !=
      std::vector<std::string>{"day", "slot", "concentration_cells_per_uL"}) {
    throw LoadError(path, 1,
                    "expected header 'day,slot,concentration_cells_per_uL' "
                    "or 'slot,mean'");
  }
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> counts;
  std::set<std::int64_t> days;
  for (const auto& [no, raw] : f.rows) {
    const auto cols = split(raw);
    if (cols.size() != 3) throw LoadError(path, no, "malformed row");
    const auto day = parse_number<std::int64_t>(cols[0]);
    const auto slot = parse_number<std::int64_t>(cols[1]);
    if (!day || !slot || *slot < 0) {
      throw LoadError(path, no, "day and slot must be non-negative integers");
    }
    const auto conc = parse_number<double>(cols[2]);
    if (!conc || !std::isfinite(*conc)) {
      throw LoadError(path, no, "non-numeric concentration");
    }
    auto& [above, total] = counts[*slot];
    ++total;
    if (*conc > gamma) ++above;
    days.insert(*day);
  }
  const std::int64_t k = counts.rbegin()->first + 1;
  if (k < 2) throw LoadError(path, 0, "need at least 2 slots");
  std::vector<double> means(static_cast<std::size_t>(k));
  std::vector<std::int64_t> obs(static_cast<std::size_t>(k));
  for (std::int64_t s = 0; s < k; ++s) {
    const auto it = counts.find(s);
    if (it == counts.end()) {
      throw LoadError(path, 0, "slot " + std::to_string(s) +
                                   " has no observations");
    }
    means[s] = static_cast<double>(it->second.first) /
               static_cast<double>(it->second.second);
    obs[s] = it->second.second;
  }
  return ExceedanceData{make_loaded_arms(std::move(means), path),
                        static_cast<std::int64_t>(days.size()), std::move(obs)};
}

std::int64_t tiled_rounds(std::int64_t days, std::int64_t target) {
  if (days < 1 || target < 1) throw Error("tiled_rounds needs positive inputs");
  return (target + days - 1) / days * days;
}

}  // namespace spnb
