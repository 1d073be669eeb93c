#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "excesslab/alpha.hpp"
#include "excesslab/interval.hpp"

namespace excesslab {

using Symbol = std::uint8_t;

/// The three example processes: two nonergodic periodic mixtures and the
/// ergodic mixing copy.
enum class ProcessKind { HPM1, HPM2, HMC };

std::string to_string(ProcessKind kind);
ProcessKind parse_process_kind(std::string_view name);

/// Hidden state sigma_{level,phase}; phases run 1..r(level).
struct StateId {
    std::uint64_t level = 2;
    std::uint64_t phase = 1;
    friend bool operator==(const StateId&, const StateId&) = default;
};

/// Enclosure of a normalizing constant defined by a convergent series.
using CertifiedConstant = Interval;

inline constexpr std::uint64_t kDefaultSeriesCutoff = 10'000'000;

/// s(n): number of binary digits of n.
std::uint64_t binary_length(std::uint64_t n);

/// b(n, k): k-th binary digit of n, most significant first (b(n,1) = 1).
Symbol binary_digit(std::uint64_t n, std::uint64_t k);

/// C with C^{-1} = sum_{n>=2} 1/(n log^alpha n). The series is summed
/// directly below `cutoff` and the remainder is bracketed in closed form.
CertifiedConstant normalization_constant(Alpha alpha, std::uint64_t cutoff = kDefaultSeriesCutoff);

/// D with D^{-1} = sum_{n>=2} 1/(3 s(n) n log^alpha n), the branch
/// normalizer of the mixing copy process.
CertifiedConstant branch_normalization_constant(Alpha alpha);

class ProcessModel {
public:
    ProcessModel(ProcessKind kind, Alpha alpha, std::uint64_t seriesCutoff = kDefaultSeriesCutoff);

    /// A model whose level law is a point mass at `level`. Kernel and
    /// emission are those of `kind`; used for degenerate test cases.
    static ProcessModel pinned(ProcessKind kind, std::uint64_t level);

    ProcessKind kind() const { return kind_; }
    Alpha alpha() const { return alpha_; }
    const CertifiedConstant& normC() const { return normC_; }
    const CertifiedConstant& normD() const;
    std::optional<std::uint64_t> pinned_level() const { return pinned_; }

    /// |X|: 2, 3, 4 for HPM1, HPM2, HMC.
    unsigned alphabet_size() const;

    /// r(n): n, s(n), 3 s(n) for HPM1, HPM2, HMC.
    std::uint64_t phases(std::uint64_t level) const;

    bool is_valid(const StateId& state) const;
    void validate(const StateId& state) const;

private:
    ProcessModel(ProcessKind kind, Alpha alpha, CertifiedConstant c, CertifiedConstant d,
                 std::optional<std::uint64_t> pinned);

    ProcessKind kind_;
    Alpha alpha_;
    CertifiedConstant normC_;
    CertifiedConstant normD_;
    std::optional<std::uint64_t> pinned_;
};

/// P(N = n).
Interval level_probability(const ProcessModel& model, std::uint64_t n);

/// P(N > cutoff).
Interval level_tail_probability(const ProcessModel& model, std::uint64_t cutoff);

/// Stationary mass of a hidden state: P(N = level) / r(level).
Interval stationary_probability(const ProcessModel& model, const StateId& state);

/// p(n): probability that a finished mixing-copy word is followed by a word
/// of level n.
Interval branch_probability(const ProcessModel& model, std::uint64_t n);

struct TransitionList {
    std::vector<std::pair<StateId, Interval>> successors;
    /// Branch mass to levels above the cutoff (zero for deterministic moves).
    Interval tailMass{0.0};
};

/// Outgoing transitions. Branches of the mixing copy are enumerated for
/// levels <= levelCutoff, the rest being reported as `tailMass`.
TransitionList transition_distribution(const ProcessModel& model, const StateId& state,
                                       std::uint64_t levelCutoff);

/// f(state): deterministic observable symbol.
Symbol emission(const ProcessModel& model, const StateId& state);

/// Emission of the whole level-n cycle (HPM) or word (HMC) over phases 1..r(n).
std::vector<Symbol> level_word(const ProcessModel& model, std::uint64_t level);

}  // namespace excesslab
