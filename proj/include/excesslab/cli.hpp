#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "excesslab/estimate.hpp"
#include "excesslab/model.hpp"

namespace excesslab {

struct RunConfig {
    ProcessKind process = ProcessKind::HPM1;
    double alpha = 1.5;
    std::vector<unsigned> blockLengths = {4, 8};
    std::uint64_t levelCutoff = 1024;
    double pruneEps = 0.0;
    std::vector<std::uint64_t> seeds = {1};
    EstimatorMethod estimator = EstimatorMethod::MillerMadow;
    std::filesystem::path outputDir = "excesslab-out";

    // Engine and sampler knobs.
    bool analyticTail = true;  ///< HPM1 closed-form aggregation of long cycles
    std::uint64_t pathBudget = 100'000'000;
    std::uint64_t entryBudget = 20'000'000;
    std::size_t trajectories = 10'000;       ///< pooled regime
    std::size_t trajectoryLength = 0;        ///< 0: 8 windows per trajectory (pooled) or 10^6 symbols (sliding)
    unsigned bootstrapResamples = 200;
    std::size_t decoderWindows = 200'000;    ///< verify: sampled windows per block length

    /// Throws std::invalid_argument on violated invariants.
    void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Parses "4,8,12" or ranges "8:28" / "8:28:4" (inclusive), or a mix.
std::vector<unsigned> parse_block_lengths(const std::string& text);

std::string library_version();

int cmd_exact(const RunConfig& config, std::ostream& log);
int cmd_estimate(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_fit(const RunConfig& config, std::ostream& log);
int cmd_info(const RunConfig& config, std::ostream& out);

/// Entry point of the command-line tool. Exit codes: 0 success, 1 a check
/// failed, 2 usage error, 3 runtime error.
int run_cli(int argc, const char* const* argv);

}  // namespace excesslab
