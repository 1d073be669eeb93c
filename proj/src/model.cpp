#include "excesslab/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "excesslab/series.hpp"

namespace excesslab {
namespace {

// Bit-length blocks beyond this are bounded by the series tail.
constexpr unsigned kBranchBlockLimit = 1u << 20;

CertifiedConstant compute_normalization(Alpha alpha, std::uint64_t cutoff) {
    const Interval head = direct_sum(alpha, 2, cutoff - 1);
    const Interval tail = tail_enclosure(alpha, static_cast<double>(cutoff));
    return Interval(1.0) / (head + tail);
}

CertifiedConstant compute_branch_normalization(Alpha alpha) {
    Interval sum(0.0);
    for (unsigned s = 2; s <= kBranchBlockLimit; ++s) {
        sum += bit_block_sums(alpha, s).mass / Interval(3.0 * s);
    }
    // Remaining blocks: every term has s > limit, so the sum is at most the
    // plain tail divided by 3 (limit + 1).
    const double log2Start = kBranchBlockLimit;
    const double a = alpha.value();
    const double tail = std::numbers::ln2 / (a - 1.0) * std::pow(log2Start, 1.0 - a);
    sum += Interval(0.0, detail::up(tail / (3.0 * (kBranchBlockLimit + 1.0)) * (1 + 1e-12)));
    return Interval(1.0) / sum;
}

template <class Key, class Fn>
CertifiedConstant cached(const Key& key, Fn&& compute) {
    static std::mutex mutex;
    static std::map<Key, CertifiedConstant> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute()).first;
    return it->second;
}

}  // namespace

std::string to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::HPM1: return "hpm1";
        case ProcessKind::HPM2: return "hpm2";
        case ProcessKind::HMC: return "hmc";
    }
    return "?";
}

ProcessKind parse_process_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "hpm1") return ProcessKind::HPM1;
    if (lower == "hpm2") return ProcessKind::HPM2;
    if (lower == "hmc") return ProcessKind::HMC;
    throw std::invalid_argument("unknown process kind '" + std::string(name) + "' (expected hpm1, hpm2 or hmc)");
}

std::uint64_t binary_length(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("binary_length: n must be positive");
    return static_cast<std::uint64_t>(std::bit_width(n));
}

Symbol binary_digit(std::uint64_t n, std::uint64_t k) {
    const std::uint64_t s = binary_length(n);
    if (k < 1 || k > s) throw std::out_of_range("binary_digit: digit index out of range");
    return static_cast<Symbol>((n >> (s - k)) & 1u);
}

CertifiedConstant normalization_constant(Alpha alpha, std::uint64_t cutoff) {
    if (cutoff < 3) throw std::invalid_argument("normalization_constant: cutoff must be >= 3");
    return cached(std::pair{alpha.value(), cutoff}, [&] { return compute_normalization(alpha, cutoff); });
}

CertifiedConstant branch_normalization_constant(Alpha alpha) {
    return cached(alpha.value(), [&] { return compute_branch_normalization(alpha); });
}

ProcessModel::ProcessModel(ProcessKind kind, Alpha alpha, std::uint64_t seriesCutoff)
    : kind_(kind),
      alpha_(alpha),
      normC_(normalization_constant(alpha, seriesCutoff)),
      normD_(kind == ProcessKind::HMC ? branch_normalization_constant(alpha) : Interval(0.0)) {}

ProcessModel::ProcessModel(ProcessKind kind, Alpha alpha, CertifiedConstant c, CertifiedConstant d,
                           std::optional<std::uint64_t> pinned)
    : kind_(kind), alpha_(alpha), normC_(c), normD_(d), pinned_(pinned) {}

ProcessModel ProcessModel::pinned(ProcessKind kind, std::uint64_t level) {
    if (level < 2) throw std::invalid_argument("pinned model: level must be >= 2");
    return ProcessModel(kind, Alpha(2.0), Interval(1.0), Interval(1.0), level);
}

const CertifiedConstant& ProcessModel::normD() const {
    if (kind_ != ProcessKind::HMC) throw std::logic_error("normD is defined only for the mixing copy process");
    return normD_;
}

unsigned ProcessModel::alphabet_size() const {
    switch (kind_) {
        case ProcessKind::HPM1: return 2;
        case ProcessKind::HPM2: return 3;
        case ProcessKind::HMC: return 4;
    }
    return 0;
}

std::uint64_t ProcessModel::phases(std::uint64_t level) const {
    if (level < 2) throw std::invalid_argument("levels start at 2");
    switch (kind_) {
        case ProcessKind::HPM1: return level;
        case ProcessKind::HPM2: return binary_length(level);
        case ProcessKind::HMC: return 3 * binary_length(level);
    }
    return 0;
}

bool ProcessModel::is_valid(const StateId& state) const {
    return state.level >= 2 && state.phase >= 1 && state.phase <= phases(state.level);
}

void ProcessModel::validate(const StateId& state) const {
    if (!is_valid(state))
        throw std::invalid_argument("invalid state sigma(" + std::to_string(state.level) + "," +
                                    std::to_string(state.phase) + ") for " + to_string(kind_));
}

Interval level_probability(const ProcessModel& model, std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("level_probability: level must be >= 2");
    if (auto p = model.pinned_level()) return Interval(n == *p ? 1.0 : 0.0);
    return widen(model.normC() * Interval(level_term(model.alpha().value(), static_cast<double>(n))), 4e-16);
}

Interval level_tail_probability(const ProcessModel& model, std::uint64_t cutoff) {
    if (cutoff < 1) throw std::invalid_argument("level_tail_probability: cutoff must be >= 1");
    if (auto p = model.pinned_level()) return Interval(*p > cutoff ? 1.0 : 0.0);
    return model.normC() * tail_enclosure(model.alpha(), static_cast<double>(std::max<std::uint64_t>(cutoff + 1, 2)));
}

Interval stationary_probability(const ProcessModel& model, const StateId& state) {
    model.validate(state);
    return level_probability(model, state.level) / Interval(static_cast<double>(model.phases(state.level)));
}

Interval branch_probability(const ProcessModel& model, std::uint64_t n) {
    if (model.kind() != ProcessKind::HMC) throw std::logic_error("branch_probability: only the mixing copy branches");
    if (n < 2) throw std::invalid_argument("branch_probability: level must be >= 2");
    if (auto p = model.pinned_level()) return Interval(n == *p ? 1.0 : 0.0);
    const double weight = level_term(model.alpha().value(), static_cast<double>(n)) / static_cast<double>(model.phases(n));
    return widen(model.normD() * Interval(weight), 4e-16);
}

TransitionList transition_distribution(const ProcessModel& model, const StateId& state,
                                       std::uint64_t levelCutoff) {
    model.validate(state);
    TransitionList out;
    const std::uint64_t r = model.phases(state.level);
    if (model.kind() != ProcessKind::HMC || state.phase < r) {
        const std::uint64_t next = state.phase < r ? state.phase + 1 : 1;
        out.successors.push_back({StateId{state.level, next}, Interval(1.0)});
        return out;
    }
    Interval kept(0.0);
    for (std::uint64_t n = 2; n <= levelCutoff; ++n) {
        const Interval p = branch_probability(model, n);
        if (p.hi == 0.0) continue;
        out.successors.push_back({StateId{n, 1}, p});
        kept += p;
    }
    out.tailMass = Interval(std::max(0.0, 1.0 - kept.hi), std::max(0.0, 1.0 - kept.lo));
    return out;
}

Symbol emission(const ProcessModel& model, const StateId& state) {
    model.validate(state);
    const std::uint64_t n = state.level;
    const std::uint64_t k = state.phase;
    switch (model.kind()) {
        case ProcessKind::HPM1: return k == n ? 1 : 0;
        case ProcessKind::HPM2: return k == 1 ? 2 : binary_digit(n, k);
        case ProcessKind::HMC: {
            const std::uint64_t s = binary_length(n);
            if (k == 1) return 2;
            if (k <= s) return binary_digit(n, k);
            if (k <= 2 * s + 1) return 3;
            return binary_digit(n, k - 2 * s);
        }
    }
    return 0;
}

std::vector<Symbol> level_word(const ProcessModel& model, std::uint64_t level) {
    const std::uint64_t r = model.phases(level);
    std::vector<Symbol> word;
    word.reserve(r);
    for (std::uint64_t k = 1; k <= r; ++k) word.push_back(emission(model, StateId{level, k}));
    return word;
}

}  // namespace excesslab
