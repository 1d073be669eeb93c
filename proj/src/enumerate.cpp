#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <unordered_map>

#include "excesslab/exact.hpp"
#include "excesslab/series.hpp"
#include "parallel.hpp"

namespace excesslab {
namespace {

constexpr double kTinyMass = 1e-30;
constexpr std::uint64_t kBudgetFlushEvery = 1u << 12;

struct Accumulator {
    std::unordered_map<BlockPair, KahanSum, BlockHash> cells;
    KahanSum pruned;
    KahanSum uncertainty;
    std::uint64_t extensions = 0;
    std::uint64_t unflushed = 0;
    std::uint64_t entryBudget = 0;

    void add(const BlockPair& key, double p) {
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted && cells.size() > entryBudget)
            throw BudgetExceeded("joint table exceeds the entry budget of " + std::to_string(entryBudget) + " entries");
        it->second += p;
    }
};

double relative_radius(const Interval& x) { return x.mid() > 0 ? x.radius() / x.mid() : 0.0; }

BlockPair window_from_cycle(const std::vector<Symbol>& word, std::uint64_t startPhase, unsigned n) {
    BlockPair key;
    const std::uint64_t r = word.size();
    std::uint64_t idx = (startPhase - 1) % r;
    for (unsigned t = 0; t < 2 * n; ++t) {
        (t < n ? key.past : key.future).push_back(word[idx]);
        if (++idx == r) idx = 0;
    }
    return key;
}

// Window with a single '1' at `position`; positions >= 2n give the all-zero window.
BlockPair single_one_window(unsigned n, unsigned position) {
    BlockPair key;
    for (unsigned t = 0; t < 2 * n; ++t) (t < n ? key.past : key.future).push_back(t == position ? 1 : 0);
    return key;
}

JointBlockTable finalize(std::vector<Accumulator>& parts, unsigned n, unsigned alphabet) {
    Accumulator& acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        for (auto& [k, v] : parts[i].cells) acc.cells[k] += v.value();
        acc.pruned += parts[i].pruned.value();
        acc.uncertainty += parts[i].uncertainty.value();
        acc.extensions += parts[i].extensions;
    }
    JointBlockTable table;
    table.blockLength = n;
    table.alphabetSize = alphabet;
    table.entries.reserve(acc.cells.size());
    KahanSum folded;
    for (auto& [k, v] : acc.cells) {
        const double p = v.value();
        if (p < kTinyMass)
            folded += std::max(p, 0.0);
        else
            table.entries.push_back({k, p});
    }
    std::sort(table.entries.begin(), table.entries.end(),
              [](const TableEntry& a, const TableEntry& b) { return a.key < b.key; });
    table.prunedMass = std::max(0.0, acc.pruned.value() + folded.value());
    table.massUncertainty = std::max(0.0, acc.uncertainty.value());
    table.pathExtensions = acc.extensions;
    return table;
}

// ---- periodic mixtures (HPM1, HPM2) ------------------------------------------

void enumerate_cycle_level(const ProcessModel& model, std::uint64_t m, unsigned n, Accumulator& acc) {
    const Interval pm = level_probability(model, m);
    if (pm.hi == 0.0) return;
    const std::uint64_t r = model.phases(m);
    const double q = pm.mid() / static_cast<double>(r);
    acc.uncertainty += pm.radius();
    acc.extensions += r;

    if (model.kind() == ProcessKind::HPM1 && m > 2 * n) {
        // The window holds at most one '1'; only its position matters.
        for (unsigned j = 0; j < 2 * n; ++j) acc.add(single_one_window(n, j), q);
        acc.add(single_one_window(n, 2 * n), q * static_cast<double>(m - 2 * n));
        return;
    }
    const std::vector<Symbol> word = level_word(model, m);
    for (std::uint64_t k = 1; k <= r; ++k) acc.add(window_from_cycle(word, k, n), q);
}

// sum_{m >= first} 1 / (m^2 log^alpha m), enclosed.
Interval inverse_square_tail(double alpha, std::uint64_t first) {
    constexpr std::uint64_t kCut = std::uint64_t{1} << 22;
    static std::mutex mutex;
    static std::map<double, double> headCache;  // sum over [2, kCut)
    double head = 0.0;
    {
        std::lock_guard lock(mutex);
        auto it = headCache.find(alpha);
        if (it == headCache.end()) {
            KahanSum s;
            for (std::uint64_t m = 2; m < kCut; ++m) s += level_term(alpha, static_cast<double>(m)) / static_cast<double>(m);
            it = headCache.emplace(alpha, s.value()).first;
        }
        head = it->second;
    }
    if (first >= kCut) throw std::invalid_argument("inverse_square_tail: start beyond cached head");
    KahanSum prefix;
    for (std::uint64_t m = 2; m < first; ++m) prefix += level_term(alpha, static_cast<double>(m)) / static_cast<double>(m);
    const double direct = head - prefix.value();

    // Integral from kCut to infinity lies in [J / (1 + alpha / (ln2 log M)), J],
    // J = 1 / (M log^alpha M); the sum adds at most the first term.
    const double M = static_cast<double>(kCut);
    const double lg = std::log2(M);
    const double J = 1.0 / (M * std::pow(lg, alpha));
    const double lo = J / (1.0 + alpha / (std::numbers::ln2 * lg));
    const double hi = J + J / M;
    return widen(Interval(direct + lo, direct + hi), 1e-13);
}

void enumerate_hpm1_analytic(const ProcessModel& model, unsigned n, Accumulator& acc) {
    const std::uint64_t explicitTop = 2 * n;
    for (std::uint64_t m = 2; m <= explicitTop; ++m) enumerate_cycle_level(model, m, n, acc);

    // Levels m > 2n: each of the 2n single-'1' windows has mass
    // A = C sum_{m>2n} f(m)/m; the all-zero window takes the rest of P(N > 2n).
    const double alpha = model.alpha().value();
    const Interval A = model.normC() * inverse_square_tail(alpha, explicitTop + 1);
    const Interval headMass = model.normC() * direct_sum(model.alpha(), 2, explicitTop);
    const Interval tailMass = Interval(1.0) - headMass;
    const Interval zeros = tailMass - Interval(2.0 * n) * A;
    for (unsigned j = 0; j < 2 * n; ++j) acc.add(single_one_window(n, j), A.mid());
    acc.add(single_one_window(n, 2 * n), zeros.mid());
    acc.uncertainty += 2.0 * n * A.radius() + zeros.radius();
}

JointBlockTable enumerate_cycles(const ProcessModel& model, unsigned n, const EnumerationOptions& o, unsigned threads) {
    if (o.analyticTail) {
        if (model.kind() != ProcessKind::HPM1 || model.pinned_level())
            throw std::invalid_argument("analytic tail aggregation is available only for the unpinned hpm1 model");
        std::vector<Accumulator> parts(1);
        parts[0].entryBudget = o.entryBudget;
        enumerate_hpm1_analytic(model, n, parts[0]);
        return finalize(parts, n, model.alphabet_size());
    }

    std::vector<std::uint64_t> levels;
    if (auto p = model.pinned_level()) {
        if (*p <= o.levelCutoff) levels.push_back(*p);
    } else {
        for (std::uint64_t m = 2; m <= o.levelCutoff; ++m) levels.push_back(m);
    }
    std::vector<Accumulator> parts(std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(levels.size()))));
    for (auto& a : parts) a.entryBudget = o.entryBudget;
    detail::parallel_chunks(levels.size(), static_cast<unsigned>(parts.size()),
                            [&](std::size_t b, std::size_t e, unsigned w) {
                                // Interleave levels so workers get similar loads.
                                for (std::size_t i = w; i < levels.size(); i += parts.size())
                                    enumerate_cycle_level(model, levels[i], n, parts[w]);
                                (void)b;
                                (void)e;
                            });
    const Interval tail = level_tail_probability(model, o.levelCutoff);
    parts[0].pruned += tail.mid();
    parts[0].uncertainty += tail.radius();
    return finalize(parts, n, model.alphabet_size());
}

// ---- mixing copy (HMC) -------------------------------------------------------

// Symbols emitted by one word before the window fills or the word ends.
// States with equal segments are indistinguishable within the window, so
// their masses are merged before walking.
struct Segment {
    std::vector<Symbol> symbols;
    bool endsWord = false;  // a branch follows if the window is not full yet
    double prob = 0.0;
    double rel = 0.0;
};

using SegmentMap = std::map<std::pair<std::vector<Symbol>, bool>, Segment>;

void merge_segment(SegmentMap& into, std::vector<Symbol> symbols, bool endsWord, double prob, double rel) {
    auto [it, inserted] = into.try_emplace({symbols, endsWord});
    Segment& s = it->second;
    if (inserted) s.symbols = std::move(symbols), s.endsWord = endsWord;
    s.prob += prob;
    s.rel = std::max(s.rel, rel);
}

std::vector<Segment> sorted_segments(SegmentMap& map) {
    std::vector<Segment> out;
    out.reserve(map.size());
    for (auto& [k, s] : map) out.push_back(std::move(s));
    std::stable_sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) { return a.prob > b.prob; });
    return out;
}

struct BranchChoices {
    std::vector<Segment> segments;  // decreasing probability
    std::vector<double> suffix;     // suffix sums of segment mass
};

struct HmcContext {
    unsigned n = 0;
    double eps = 0.0;
    std::uint64_t pathBudget = 0;
    std::vector<BranchChoices> branches;  // indexed by the room left in the window
    double tailLump = 0.0;
    double tailLumpRadius = 0.0;
    std::atomic<std::uint64_t>* sharedExtensions = nullptr;
};

class HmcWalker {
public:
    HmcWalker(const HmcContext& ctx, Accumulator& acc) : ctx_(ctx), acc_(acc), buf_(2 * ctx.n) {}

    void walk(const Segment& seg, unsigned t, double prob, double rel) {
        for (Symbol x : seg.symbols) buf_[t++] = x;
        count_extensions(seg.symbols.size());
        if (t == 2 * ctx_.n) {
            record(prob, rel);
            return;
        }
        acc_.pruned += prob * ctx_.tailLump;
        acc_.uncertainty += prob * (ctx_.tailLumpRadius + ctx_.tailLump * rel);
        const BranchChoices& choices = ctx_.branches[2 * ctx_.n - t];
        for (std::size_t i = 0; i < choices.segments.size(); ++i) {
            const Segment& child = choices.segments[i];
            const double p = prob * child.prob;
            if (p < ctx_.eps) {
                const double rest = prob * choices.suffix[i];
                acc_.pruned += rest;
                acc_.uncertainty += rest * (rel + child.rel);
                break;
            }
            walk(child, t, p, rel + child.rel);
        }
    }

    void flush() {
        if (ctx_.sharedExtensions) ctx_.sharedExtensions->fetch_add(acc_.unflushed);
        acc_.unflushed = 0;
    }

private:
    void count_extensions(std::size_t k) {
        acc_.extensions += k;
        acc_.unflushed += k;
        if (acc_.unflushed >= kBudgetFlushEvery) {
            const std::uint64_t total = ctx_.sharedExtensions->fetch_add(acc_.unflushed) + acc_.unflushed;
            acc_.unflushed = 0;
            if (total > ctx_.pathBudget)
                throw BudgetExceeded("path enumeration exceeds the budget of " + std::to_string(ctx_.pathBudget) +
                                     " extensions");
        }
    }

    void record(double prob, double rel) {
        BlockPair key;
        for (unsigned i = 0; i < ctx_.n; ++i) key.past.push_back(buf_[i]);
        for (unsigned i = ctx_.n; i < 2 * ctx_.n; ++i) key.future.push_back(buf_[i]);
        acc_.add(key, prob);
        acc_.uncertainty += prob * rel;
    }

    const HmcContext& ctx_;
    Accumulator& acc_;
    std::vector<Symbol> buf_;
};

JointBlockTable enumerate_hmc(const ProcessModel& model, unsigned n, const EnumerationOptions& o, unsigned threads) {
    if (o.analyticTail) throw std::invalid_argument("analytic tail aggregation is available only for hpm1");
    HmcContext ctx;
    ctx.n = n;
    ctx.eps = o.pruneEps;
    ctx.pathBudget = o.pathBudget;
    std::atomic<std::uint64_t> extensions{0};
    ctx.sharedExtensions = &extensions;
    const unsigned window = 2 * n;

    std::vector<std::uint64_t> levels;
    if (auto p = model.pinned_level()) {
        if (*p <= o.levelCutoff) levels.push_back(*p);
    } else {
        for (std::uint64_t m = 2; m <= o.levelCutoff; ++m) levels.push_back(m);
    }
    std::map<std::uint64_t, std::vector<Symbol>> words;
    for (std::uint64_t m : levels) words[m] = level_word(model, m);
    auto segment_of = [&](std::uint64_t m, std::uint64_t phase, unsigned room) {
        const std::vector<Symbol>& w = words.at(m);
        const std::uint64_t left = w.size() - (phase - 1);
        const std::uint64_t take = std::min<std::uint64_t>(left, room);
        return std::pair{std::vector<Symbol>(w.begin() + static_cast<std::ptrdiff_t>(phase - 1),
                                             w.begin() + static_cast<std::ptrdiff_t>(phase - 1 + take)),
                         left <= room};
    };

    const StateId anyBranchState{2, model.phases(2)};
    const TransitionList branch = transition_distribution(model, anyBranchState, o.levelCutoff);
    ctx.branches.resize(window + 1);
    for (unsigned room = 1; room <= window; ++room) {
        SegmentMap map;
        for (const auto& [state, p] : branch.successors) {
            auto [symbols, ends] = segment_of(state.level, 1, room);
            merge_segment(map, std::move(symbols), ends, p.mid(), relative_radius(p));
        }
        BranchChoices& c = ctx.branches[room];
        c.segments = sorted_segments(map);
        c.suffix.assign(c.segments.size() + 1, 0.0);
        for (std::size_t i = c.segments.size(); i-- > 0;) c.suffix[i] = c.suffix[i + 1] + c.segments[i].prob;
    }
    ctx.tailLump = branch.tailMass.mid();
    ctx.tailLumpRadius = branch.tailMass.radius();

    SegmentMap seedMap;
    Accumulator seedLoss;
    for (std::uint64_t m : levels) {
        const Interval pm = level_probability(model, m);
        const std::uint64_t r = model.phases(m);
        const double q = pm.mid() / static_cast<double>(r);
        const double rel = relative_radius(pm);
        if (q < ctx.eps) {
            seedLoss.pruned += pm.mid();
            seedLoss.uncertainty += pm.radius();
            continue;
        }
        for (std::uint64_t k = 1; k <= r; ++k) {
            auto [symbols, ends] = segment_of(m, k, window);
            merge_segment(seedMap, std::move(symbols), ends, q, rel);
        }
    }
    const std::vector<Segment> seeds = sorted_segments(seedMap);

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size()))));
    std::vector<Accumulator> parts(workers);
    for (auto& a : parts) a.entryBudget = o.entryBudget;
    detail::parallel_chunks(seeds.size(), workers, [&](std::size_t, std::size_t, unsigned w) {
        HmcWalker walker(ctx, parts[w]);
        for (std::size_t i = w; i < seeds.size(); i += workers) walker.walk(seeds[i], 0, seeds[i].prob, seeds[i].rel);
        walker.flush();
    });

    const Interval tail = level_tail_probability(model, o.levelCutoff);
    parts[0].pruned += tail.mid() + seedLoss.pruned.value();
    parts[0].uncertainty += tail.radius() + seedLoss.uncertainty.value();
    return finalize(parts, n, model.alphabet_size());
}

}  // namespace

unsigned default_thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EXCESSLAB_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

JointBlockTable enumerate_joint(const ProcessModel& model, unsigned n, const EnumerationOptions& options) {
    if (n < 1) throw std::invalid_argument("enumerate_joint: block length must be >= 1");
    if (n > Block::kMaxLength) throw std::invalid_argument("enumerate_joint: block length must be <= 64");
    if (options.levelCutoff < 2) throw std::invalid_argument("enumerate_joint: levelCutoff must be >= 2");
    if (!(options.pruneEps >= 0.0 && options.pruneEps < 1.0))
        throw std::invalid_argument("enumerate_joint: pruneEps must lie in [0, 1)");
    const unsigned threads = options.threads ? options.threads : default_thread_count();
    if (model.kind() == ProcessKind::HMC) return enumerate_hmc(model, n, options, threads);
    return enumerate_cycles(model, n, options, threads);
}

}  // namespace excesslab
