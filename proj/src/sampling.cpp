#include "excesslab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>

#include <json.hpp>

#include "excesslab/exact.hpp"
#include "excesslab/series.hpp"
#include "parallel.hpp"

namespace excesslab {
namespace {

// Bit lengths are capped so that 3 s(level) still fits in 64 bits.
constexpr std::uint64_t kMaxBits = std::uint64_t{1} << 60;

struct LevelTable {
    std::vector<double> cumulative;  // cumulative[m] = sum_{j=2}^{m} f(j)
    double total = 0.0;              // 1 / C
};

std::shared_ptr<const LevelTable> level_table(Alpha alpha) {
    static std::mutex mutex;
    static std::map<double, std::shared_ptr<const LevelTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[alpha.value()];
    if (!slot) {
        auto t = std::make_shared<LevelTable>();
        t->cumulative.assign(kLevelTableSize + 1, 0.0);
        KahanSum acc;
        for (std::uint64_t m = 2; m <= kLevelTableSize; ++m) {
            acc += level_term(alpha.value(), static_cast<double>(m));
            t->cumulative[m] = acc.value();
        }
        t->total = 1.0 / normalization_constant(alpha).mid();
        slot = std::move(t);
    }
    return slot;
}

SampledLevel exact_level(std::uint64_t m) { return {binary_length(m), m, 0, 0}; }

// Level above the table: log2 X = log2(K) V^{-1/(alpha-1)} has the continuous
// tail law; ceil(X) accepted with probability f(ceil X) / f(X) is exact.
std::optional<SampledLevel> draw_tail(Alpha alpha, Rng& rng) {
    const double uK = std::log2(static_cast<double>(kLevelTableSize));
    const double u = uK * std::pow(rng.uniform_positive(), -1.0 / (alpha.value() - 1.0));
    if (u < 53.0) {
        const double x = std::exp2(u);
        const double m = std::ceil(x);
        if (m <= static_cast<double>(kLevelTableSize)) return std::nullopt;
        if (rng.uniform() * level_term(alpha.value(), x) >= level_term(alpha.value(), m)) return std::nullopt;
        return exact_level(static_cast<std::uint64_t>(m));
    }
    // Beyond double resolution the acceptance ratio is 1 to within 2^-52 and
    // the low digits are uniform to the same accuracy.
    SampledLevel level;
    level.bits = u >= static_cast<double>(kMaxBits) ? kMaxBits : static_cast<std::uint64_t>(std::floor(u)) + 1;
    const double frac = u >= static_cast<double>(kMaxBits) ? rng.uniform() : u - std::floor(u);
    level.top = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::ldexp(std::exp2(frac), 52)),
                                        (std::uint64_t{1} << 53) - 1);
    level.lowKey = rng.next();
    if (level.bits <= 64) {
        const unsigned low = static_cast<unsigned>(level.bits - 53);
        const std::uint64_t mask = (std::uint64_t{1} << low) - 1;
        level.value = (level.top << low) | (level.lowKey & mask);
    } else {
        level.value = 0;
    }
    return level;
}

Symbol emit(ProcessKind kind, const SampledLevel& level, std::uint64_t phase) {
    const std::uint64_t s = level.bits;
    switch (kind) {
        case ProcessKind::HPM1: return level.exact() && phase == level.value ? 1 : 0;
        case ProcessKind::HPM2: return phase == 1 ? 2 : level.digit(phase);
        case ProcessKind::HMC:
            if (phase == 1) return 2;
            if (phase <= s) return level.digit(phase);
            if (phase <= 2 * s + 1) return 3;
            return level.digit(phase - 2 * s);
    }
    return 0;
}

std::uint64_t phase_count(ProcessKind kind, const SampledLevel& level) {
    switch (kind) {
        case ProcessKind::HPM1: return level.exact() ? level.value : 0;
        case ProcessKind::HPM2: return level.bits;
        case ProcessKind::HMC: return 3 * level.bits;
    }
    return 0;
}

}  // namespace

Symbol SampledLevel::digit(std::uint64_t k) const {
    if (k < 1 || k > bits) throw std::out_of_range("SampledLevel::digit: position out of range");
    if (exact()) return binary_digit(value, k);
    if (k <= 53) return static_cast<Symbol>((top >> (53 - k)) & 1u);
    return static_cast<Symbol>(mix64(lowKey + k * Rng::kGolden) & 1u);
}

SampledLevel sample_level(Alpha alpha, Rng& rng) {
    const auto table = level_table(alpha);
    for (;;) {
        const double u = rng.uniform() * table->total;
        if (u < table->cumulative[kLevelTableSize]) {
            const auto it = std::upper_bound(table->cumulative.begin() + 2, table->cumulative.end(), u);
            return exact_level(static_cast<std::uint64_t>(it - table->cumulative.begin()));
        }
        if (auto level = draw_tail(alpha, rng)) return *level;
    }
}

SampledLevel sample_branch_level(Alpha alpha, Rng& rng) {
    for (;;) {
        SampledLevel level = sample_level(alpha, rng);
        // Thinning by 2 / s(n) turns the level law into the branch law.
        if (rng.uniform() * static_cast<double>(level.bits) < 2.0) return level;
    }
}

Trajectory sample_trajectory(const ProcessModel& model, std::size_t length, std::uint64_t seed, bool keepHidden) {
    if (length < 1) throw std::invalid_argument("sample_trajectory: length must be >= 1");
    Rng rng(seed);
    const ProcessKind kind = model.kind();
    auto draw = [&](bool branch) {
        if (auto p = model.pinned_level()) return exact_level(*p);
        return branch ? sample_branch_level(model.alpha(), rng) : sample_level(model.alpha(), rng);
    };

    Trajectory t;
    t.seed = seed;
    t.symbols.reserve(length);
    if (keepHidden) t.hidden.emplace().reserve(length);

    SampledLevel level = draw(false);
    std::uint64_t phases = phase_count(kind, level);
    if (kind == ProcessKind::HPM1 && !level.exact()) {
        // A cycle longer than 2^64 shows its single '1' within the first
        // `length` steps with probability below length * 2^-64; it is omitted.
        t.symbols.assign(length, 0);
        if (keepHidden) t.hidden->assign(length, StateId{level.saturated(), 0});
        return t;
    }
    std::uint64_t phase = 1 + rng.below(phases);
    for (std::size_t i = 0; i < length; ++i) {
        t.symbols.push_back(emit(kind, level, phase));
        if (keepHidden) t.hidden->push_back({level.saturated(), phase});
        if (phase < phases) {
            ++phase;
        } else if (kind == ProcessKind::HMC) {
            level = draw(true);
            phases = phase_count(kind, level);
            phase = 1;
        } else {
            phase = 1;
        }
    }
    return t;
}

std::vector<Trajectory> sample_trajectories(const ProcessModel& model, std::size_t count, std::size_t length,
                                            std::uint64_t baseSeed, unsigned threads) {
    std::vector<Trajectory> out(count);
    detail::parallel_chunks(count, threads ? threads : default_thread_count(),
                            [&](std::size_t begin, std::size_t end, unsigned) {
                                for (std::size_t i = begin; i < end; ++i)
                                    out[i] = sample_trajectory(model, length, Rng::derive(baseSeed, i).seed());
                            });
    return out;
}

void export_trajectory(const Trajectory& trajectory, const ProcessModel& model, const std::filesystem::path& path) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out.write(reinterpret_cast<const char*>(trajectory.symbols.data()),
                  static_cast<std::streamsize>(trajectory.symbols.size()));
    }
    nlohmann::json meta = {{"kind", to_string(model.kind())},
                           {"alpha", model.alpha().value()},
                           {"seed", trajectory.seed},
                           {"length", trajectory.symbols.size()}};
    if (auto p = model.pinned_level()) meta["pinned_level"] = *p;
    std::ofstream side(path.string() + ".json");
    if (!side) throw std::runtime_error("cannot open " + path.string() + ".json for writing");
    side << meta.dump(2) << '\n';
}

}  // namespace excesslab
