#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "excesslab/sampling.hpp"

namespace excesslab {

enum class EstimatorMethod { Plugin, MillerMadow };

std::string to_string(EstimatorMethod m);
EstimatorMethod parse_estimator_method(std::string_view name);

/// How windows were collected.
enum class SamplingRegime {
    Sliding,  ///< stride-1 windows of one trajectory (ergodic case)
    Pooled,   ///< disjoint windows pooled over independently seeded trajectories
};

std::string to_string(SamplingRegime r);

struct EstimatorOptions {
    EstimatorMethod method = EstimatorMethod::MillerMadow;
    unsigned bootstrapResamples = 200;
    /// Windows per bootstrap block for sliding windows; 0 picks about sqrt(count).
    std::size_t bootstrapBlock = 0;
    std::uint64_t bootstrapSeed = 0x5EEDull;
    /// Minimum number of windows.
    std::size_t minWindows = 16;
    unsigned threads = 0;
};

struct EstimatorReport {
    double pointEstimate = 0.0;
    double stdError = 0.0;
    std::size_t sampleCount = 0;  ///< number of (past, future) windows
    EstimatorMethod method = EstimatorMethod::Plugin;
    SamplingRegime regime = SamplingRegime::Sliding;
    double plugin = 0.0;  ///< the uncorrected estimate
    std::size_t supportJoint = 0, supportPast = 0, supportFuture = 0;
};

class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sliding windows over one trajectory; the bootstrap resamples blocks of windows.
EstimatorReport estimate_block_mi(const Trajectory& trajectory, unsigned n, const EstimatorOptions& options = {});

/// Disjoint windows from each trajectory, pooled; the bootstrap resamples trajectories.
EstimatorReport estimate_block_mi_pooled(std::span<const Trajectory> trajectories, unsigned n,
                                         const EstimatorOptions& options = {});

}  // namespace excesslab
