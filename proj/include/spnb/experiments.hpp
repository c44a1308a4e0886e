#pragma once

// Problem instances: synthetic regret instances, the seven Audibert et al.
// best-arm suites, and user-supplied CSV data.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spnb/bandit_core.hpp"
#include "spnb/rng.hpp"

namespace spnb {

class LoadError : public Error {
 public:
  LoadError(const std::filesystem::path& path, std::size_t line,
            const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Uniform means, rejection-sampled until the best arm leads every other arm
/// by at least min_gap, then the runner-up is raised so the smallest gap is
/// exactly min_gap.
ArmSet gen_synthetic_rm(std::size_t arms, double min_gap, RngStream& rng,
                        std::size_t max_attempts = 1'000'000);

/// Means of best-arm experiment id in 1..7; arm 0 is the best (0.5).
ArmSet audibert_experiment(int id);
/// Round budget used for experiment id (the original pull budgets).
std::int64_t audibert_budget(int id);

/// `slot,mean` CSV, one row per arm in file order.
struct SlotMeans {
  std::vector<std::string> labels;
  ArmSet arms;
};
SlotMeans load_slot_means_csv(const std::filesystem::path& path);

/// Raw `day,slot,concentration_cells_per_uL` rows reduced to per-slot
/// exceedance frequencies above gamma; slots are 0-based integers. A
/// reduced `slot,mean` file is accepted as well.
struct ExceedanceData {
  ArmSet arms;
  std::int64_t days = 0;
  std::vector<std::int64_t> observations;  // per slot
};
ExceedanceData load_exceedance_csv(const std::filesystem::path& path,
                                   double gamma);

/// Rounds obtained by repeating a `days`-long stationary period until at
/// least `target` rounds are covered.
std::int64_t tiled_rounds(std::int64_t days, std::int64_t target);

}  // namespace spnb
