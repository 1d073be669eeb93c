#include "excesslab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <unordered_map>

#include "excesslab/block.hpp"
#include "excesslab/exact.hpp"
#include "parallel.hpp"

namespace excesslab {
namespace {

// Windows reduced to dense ids.
struct WindowIds {
    std::vector<std::uint32_t> joint, past, future;
    std::size_t jointCount = 0, pastCount = 0, futureCount = 0;
};

template <class Key, class Hash>
std::uint32_t intern(std::unordered_map<Key, std::uint32_t, Hash>& map, const Key& key) {
    return map.try_emplace(key, static_cast<std::uint32_t>(map.size())).first->second;
}

struct WindowCollector {
    std::unordered_map<BlockPair, std::uint32_t, BlockHash> joint;
    std::unordered_map<Block, std::uint32_t, BlockHash> past, future;
    WindowIds ids;

    void add(std::span<const Symbol> symbols, std::size_t start, unsigned n) {
        const BlockPair w = split_window(symbols.subspan(start, 2 * n));
        ids.joint.push_back(intern(joint, w));
        ids.past.push_back(intern(past, w.past));
        ids.future.push_back(intern(future, w.future));
    }

    WindowIds finish() {
        ids.jointCount = joint.size();
        ids.pastCount = past.size();
        ids.futureCount = future.size();
        return std::move(ids);
    }
};

struct Estimate {
    double plugin = 0.0;
    double corrected = 0.0;
    std::size_t kJoint = 0, kPast = 0, kFuture = 0;
};

// Entropy in bits of a count vector with total `total`.
double count_entropy(const std::vector<double>& counts, double total, std::size_t& support) {
    KahanSum acc;
    support = 0;
    for (double c : counts)
        if (c > 0.0) {
            acc += c * std::log2(c);
            ++support;
        }
    return std::log2(total) - acc.value() / total;
}

struct Scratch {
    std::vector<double> joint, past, future;
};

Estimate evaluate(const WindowIds& w, const std::vector<double>& weight, Scratch& s) {
    s.joint.assign(w.jointCount, 0.0);
    s.past.assign(w.pastCount, 0.0);
    s.future.assign(w.futureCount, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < w.joint.size(); ++i) {
        const double c = weight.empty() ? 1.0 : weight[i];
        if (c == 0.0) continue;
        s.joint[w.joint[i]] += c;
        s.past[w.past[i]] += c;
        s.future[w.future[i]] += c;
        total += c;
    }
    Estimate e;
    const double hj = count_entropy(s.joint, total, e.kJoint);
    const double hp = count_entropy(s.past, total, e.kPast);
    const double hf = count_entropy(s.future, total, e.kFuture);
    e.plugin = std::max(0.0, hp + hf - hj);
    // Miller-Madow: each entropy gains (K - 1) / (2 S ln 2), so the
    // information loses (K_joint - K_past - K_future + 1) / (2 S ln 2).
    const double bias = (static_cast<double>(e.kJoint) - static_cast<double>(e.kPast) -
                         static_cast<double>(e.kFuture) + 1.0) /
                        (2.0 * total * std::numbers::ln2);
    e.corrected = e.plugin - bias;
    return e;
}

double pick(const Estimate& e, EstimatorMethod m) { return m == EstimatorMethod::Plugin ? e.plugin : e.corrected; }

// Fills per-window weights for one bootstrap replicate.
using Resampler = std::function<void(Rng&, std::vector<double>&)>;

EstimatorReport run(const WindowIds& w, const EstimatorOptions& o, SamplingRegime regime, const Resampler& resample) {
    Scratch scratch;
    const Estimate full = evaluate(w, {}, scratch);
    EstimatorReport r;
    r.method = o.method;
    r.regime = regime;
    r.sampleCount = w.joint.size();
    r.pointEstimate = pick(full, o.method);
    r.plugin = full.plugin;
    r.supportJoint = full.kJoint;
    r.supportPast = full.kPast;
    r.supportFuture = full.kFuture;
    if (o.bootstrapResamples < 2) return r;

    std::vector<double> values(o.bootstrapResamples);
    detail::parallel_chunks(values.size(), o.threads ? o.threads : default_thread_count(),
                            [&](std::size_t begin, std::size_t end, unsigned) {
                                Scratch local;
                                std::vector<double> weight(w.joint.size());
                                for (std::size_t b = begin; b < end; ++b) {
                                    Rng rng = Rng::derive(o.bootstrapSeed, b);
                                    std::fill(weight.begin(), weight.end(), 0.0);
                                    resample(rng, weight);
                                    values[b] = pick(evaluate(w, weight, local), o.method);
                                }
                            });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    r.stdError = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return r;
}

}  // namespace

std::string to_string(EstimatorMethod m) { return m == EstimatorMethod::Plugin ? "plugin" : "millerMadow"; }

EstimatorMethod parse_estimator_method(std::string_view name) {
    if (name == "plugin") return EstimatorMethod::Plugin;
    if (name == "millerMadow" || name == "miller-madow" || name == "mm") return EstimatorMethod::MillerMadow;
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "' (expected plugin or millerMadow)");
}

std::string to_string(SamplingRegime r) { return r == SamplingRegime::Sliding ? "sliding" : "pooled"; }

EstimatorReport estimate_block_mi(const Trajectory& trajectory, unsigned n, const EstimatorOptions& options) {
    if (n < 1 || n > Block::kMaxLength) throw std::invalid_argument("estimate_block_mi: n must be in 1..64");
    const std::size_t minLength = 2 * static_cast<std::size_t>(n) + options.minWindows - 1;
    if (trajectory.symbols.size() < minLength)
        throw InsufficientData("estimate_block_mi: trajectory of length " + std::to_string(trajectory.symbols.size()) +
                               " is too short; need at least " + std::to_string(minLength) + " symbols");
    const std::size_t count = trajectory.symbols.size() - 2 * n + 1;
    const std::size_t block =
        options.bootstrapBlock ? std::min(options.bootstrapBlock, count)
                               : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(count))));
    WindowCollector c;
    for (std::size_t i = 0; i < count; ++i) c.add(trajectory.symbols, i, n);
    const WindowIds ids = c.finish();

    // Moving-block bootstrap: ceil(count / block) blocks of consecutive windows.
    const Resampler resample = [count, block](Rng& rng, std::vector<double>& weight) {
        const std::size_t draws = (count + block - 1) / block;
        std::vector<double> diff(count + 1, 0.0);
        for (std::size_t d = 0; d < draws; ++d) {
            const std::size_t start = rng.below(count - block + 1);
            diff[start] += 1.0;
            diff[start + block] -= 1.0;
        }
        double run = 0.0;
        for (std::size_t i = 0; i < count; ++i) weight[i] = (run += diff[i]);
    };
    return run(ids, options, SamplingRegime::Sliding, resample);
}

EstimatorReport estimate_block_mi_pooled(std::span<const Trajectory> trajectories, unsigned n,
                                         const EstimatorOptions& options) {
    if (n < 1 || n > Block::kMaxLength) throw std::invalid_argument("estimate_block_mi_pooled: n must be in 1..64");
    WindowCollector c;
    std::vector<std::size_t> firstWindow;
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
        const auto& s = trajectories[t].symbols;
        if (s.size() < 2 * static_cast<std::size_t>(n))
            throw InsufficientData("estimate_block_mi_pooled: trajectory " + std::to_string(t) + " has length " +
                                   std::to_string(s.size()) + "; need at least " + std::to_string(2 * n));
        firstWindow.push_back(c.ids.joint.size());
        for (std::size_t start = 0; start + 2 * n <= s.size(); start += 2 * n)
            c.add(s, start, n);
    }
    firstWindow.push_back(c.ids.joint.size());
    if (c.ids.joint.size() < options.minWindows)
        throw InsufficientData("estimate_block_mi_pooled: " + std::to_string(c.ids.joint.size()) +
                               " windows collected; need at least " + std::to_string(options.minWindows) +
                               " (trajectories of length >= " + std::to_string(2 * n) + ")");
    const WindowIds ids = c.finish();

    // Cluster bootstrap over trajectories: windows of one trajectory share a level.
    const Resampler resample = [&firstWindow, groups = trajectories.size()](Rng& rng, std::vector<double>& weight) {
        for (std::size_t d = 0; d < groups; ++d) {
            const std::size_t g = rng.below(groups);
            for (std::size_t i = firstWindow[g]; i < firstWindow[g + 1]; ++i) weight[i] += 1.0;
        }
    };
    return run(ids, options, SamplingRegime::Pooled, resample);
}

}  // namespace excesslab
