#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "excesslab/alpha.hpp"
#include "excesslab/model.hpp"
#include "excesslab/rng.hpp"

namespace excesslab {

/// A level drawn from the level law. Levels with up to 64 binary digits are
/// exact; longer ones keep their bit length, their leading 53 digits and a
/// key from which the remaining digits are generated on demand.
struct SampledLevel {
    std::uint64_t bits = 2;   ///< s(level)
    std::uint64_t value = 2;  ///< exact when bits <= 64
    std::uint64_t top = 0;    ///< leading 53 digits (leading one included) when bits > 64
    std::uint64_t lowKey = 0;

    bool exact() const { return bits <= 64; }
    /// b(level, k), 1 <= k <= bits.
    Symbol digit(std::uint64_t k) const;
    /// Level as stored in hidden-state records; saturates at 2^64 - 1.
    std::uint64_t saturated() const { return exact() ? value : ~std::uint64_t{0}; }
};

/// Levels up to this value are drawn by inverse CDF from a cached table.
inline constexpr std::uint64_t kLevelTableSize = std::uint64_t{1} << 20;

/// One draw of N with P(N = n) = C / (n log^alpha n).
SampledLevel sample_level(Alpha alpha, Rng& rng);

/// One draw from the mixing-copy branch law p(n) proportional to 1 / (3 s(n) n log^alpha n).
SampledLevel sample_branch_level(Alpha alpha, Rng& rng);

struct Trajectory {
    std::vector<Symbol> symbols;
    /// Hidden state at each time; levels of more than 64 bits saturate, and
    /// HPM1 phases that cannot be represented are stored as 0.
    std::optional<std::vector<StateId>> hidden;
    std::uint64_t seed = 0;
};

/// Stationary trajectory: initial level from the level law, phase uniform,
/// then the kernel. Pinned models start on their fixed level.
Trajectory sample_trajectory(const ProcessModel& model, std::size_t length, std::uint64_t seed,
                             bool keepHidden = false);

/// `count` independent trajectories with seeds derived from `baseSeed`.
std::vector<Trajectory> sample_trajectories(const ProcessModel& model, std::size_t count, std::size_t length,
                                            std::uint64_t baseSeed, unsigned threads = 0);

/// Writes `path` (one byte per symbol) and `path` + ".json" (kind, alpha, seed, length).
void export_trajectory(const Trajectory& trajectory, const ProcessModel& model, const std::filesystem::path& path);

}  // namespace excesslab
