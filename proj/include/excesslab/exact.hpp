#pragma once

// Exact joint law of adjacent blocks (X_{-n+1..0}, X_{1..n}) on a truncated
// level support, and certified entropies / informations computed from it.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "excesslab/block.hpp"
#include "excesslab/model.hpp"

namespace excesslab {

/// Thrown when an enumeration would exceed its entry or path budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a label computed from the past disagrees with the same label
/// computed from the future.
class LabelDisagreement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TableEntry {
    BlockPair key;
    double probability = 0.0;
};

/// Finite (sub-)probability table over block pairs. Entries are sorted by key,
/// unique and strictly positive. Mass that was not materialized is tracked in
/// `prunedMass`; `massUncertainty` bounds the L1 error of the entry masses
/// (coming from the enclosures of the normalizing constants).
struct JointBlockTable {
    unsigned blockLength = 0;
    unsigned alphabetSize = 0;
    std::vector<TableEntry> entries;
    double prunedMass = 0.0;
    double massUncertainty = 0.0;
    std::uint64_t pathExtensions = 0;

    double entry_mass() const;
    /// prunedMass + massUncertainty: the total-variation budget used by every
    /// error bound derived from this table.
    double missing_mass() const { return prunedMass + massUncertainty; }

    /// Builds a table from raw (key, probability) pairs, merging duplicates.
    static JointBlockTable from_entries(unsigned blockLength, unsigned alphabetSize,
                                        std::vector<TableEntry> raw, double prunedMass = 0.0,
                                        double massUncertainty = 0.0);
};

struct EnumerationOptions {
    std::uint64_t levelCutoff = 1024;
    double pruneEps = 0.0;
    std::uint64_t entryBudget = 20'000'000;
    /// Emitted-symbol budget for path enumeration of the mixing copy.
    std::uint64_t pathBudget = 100'000'000;
    /// HPM1 only: aggregate all levels above 2n in closed form instead of
    /// truncating at levelCutoff.
    bool analyticTail = false;
    /// 0 = use the default thread count (see default_thread_count()).
    unsigned threads = 0;
};

/// Hardware concurrency, capped by the EXCESSLAB_THREADS environment variable.
unsigned default_thread_count();

JointBlockTable enumerate_joint(const ProcessModel& model, unsigned n, const EnumerationOptions& options);

inline JointBlockTable enumerate_joint(const ProcessModel& model, unsigned n, std::uint64_t levelCutoff,
                                       double pruneEps) {
    EnumerationOptions o;
    o.levelCutoff = levelCutoff;
    o.pruneEps = pruneEps;
    return enumerate_joint(model, n, o);
}

/// Value in bits with a certified enclosure [value - errLow, value + errHigh].
struct MIResult {
    double value = 0.0;
    double errLow = 0.0;
    double errHigh = 0.0;

    double lower() const { return value - errLow; }
    double upper() const { return value + errHigh; }
    double width() const { return errLow + errHigh; }
};

/// Uniform-continuity bound on |H(P) - H(Q)| when the tables differ by at most
/// `missing` in total variation and log2 of the support size is `log2Support`.
double missing_mass_entropy_bound(double missing, double log2Support);

enum class Marginal { Joint, Past, Future };

/// -sum p log2 p over the chosen marginal of the entries (not renormalized).
MIResult entropy(const JointBlockTable& table, Marginal which = Marginal::Joint);

/// H(past) + H(future) - H(past, future).
MIResult block_mi(const JointBlockTable& table);

using Label = std::uint64_t;
using PairLabel = std::function<Label(const BlockPair&)>;

/// A label computable from either block alone.
struct SplitLabel {
    std::function<Label(const Block&)> fromPast;
    std::function<Label(const Block&)> fromFuture;
};

/// sum_z P(z) I(past; future | z), each term on the renormalized sub-table.
MIResult conditional_mi_given(const JointBlockTable& table, const PairLabel& label);

/// As above; throws LabelDisagreement if the two label routes differ on any entry.
MIResult conditional_mi_given(const JointBlockTable& table, const SplitLabel& label);

/// -sum_z P(z) log2 P(z) for a split label (not renormalized); checks agreement.
MIResult label_entropy(const JointBlockTable& table, const SplitLabel& label);

using PairEvent = std::function<bool(const BlockPair&)>;

/// I(X;Y;I_B) = I(X;Y) - P(B) I(X;Y|B) - P(B^c) I(X;Y|B^c), evaluated on the
/// table renormalized to unit mass.
double triple_information(const JointBlockTable& table, const PairEvent& event);

// ---- persistence -----------------------------------------------------------

/// CSV with header "past,future,probability"; probabilities use 17 significant digits.
void write_table_csv(const JointBlockTable& table, std::ostream& out);
void write_table_csv(const JointBlockTable& table, const std::filesystem::path& path);

/// Versioned little-endian binary cache.
void write_table_binary(const JointBlockTable& table, const std::filesystem::path& path);
JointBlockTable read_table_binary(const std::filesystem::path& path);

}  // namespace excesslab
