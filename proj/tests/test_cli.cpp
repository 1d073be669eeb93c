#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "excesslab/cli.hpp"

using namespace excesslab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "excesslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("block length lists") {
    CHECK(parse_block_lengths("4,8") == std::vector<unsigned>{4, 8});
    CHECK(parse_block_lengths("8:12") == std::vector<unsigned>{8, 9, 10, 11, 12});
    CHECK(parse_block_lengths("8:28:10") == std::vector<unsigned>{8, 18, 28});
    CHECK(parse_block_lengths("1,4:6") == std::vector<unsigned>{1, 4, 5, 6});
    CHECK_THROWS(parse_block_lengths("4x"));
    CHECK_THROWS(parse_block_lengths("9:3"));
}

TEST_CASE("config validation and round trip") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.blockLengths = {};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.blockLengths = {8, 4};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.blockLengths = {4};
    c.alpha = 2.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.alpha = 1.5;
    c.pruneEps = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    RunConfig d;
    d.process = ProcessKind::HMC;
    d.alpha = 2.0;
    d.blockLengths = {2, 3, 5};
    d.seeds = {9, 10};
    d.estimator = EstimatorMethod::Plugin;
    const RunConfig back = config_from_json(to_json(d));
    CHECK(to_json(back) == to_json(d));
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"bogus", 1}}), std::invalid_argument);
}

TEST_CASE("exact subcommand") {
    TempDir dir("excesslab_cli_exact");
    CHECK(run({"exact", "--process", "hpm1", "--n", "1:8", "--out", dir.path.string()}) == 0);
    const auto rows = lines(dir.path / "exact.csv");
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].rfind("kind,alpha,n,value,err_low,err_high", 0) == 0);
    CHECK(rows[8].rfind("hpm1,1.5,8,", 0) == 0);
    const auto j = read_json(dir.path / "exact.json");
    CHECK(j["version"] == library_version());
    CHECK(j["config"]["process"] == "hpm1");

    // The mixing copy beyond the path budget is reported as skipped.
    std::ofstream(dir.path / "cfg.json") << R"({"process": "hmc", "pathBudget": 20000, "levelCutoff": 256})";
    CHECK(run({"exact", "--config", (dir.path / "cfg.json").string(), "--n", "2,10", "--out", dir.path.string()}) == 0);
    const auto hmc = lines(dir.path / "exact.csv");
    REQUIRE(hmc.size() == 3);
    CHECK(hmc[1].find(",ok") != std::string::npos);
    CHECK(hmc[2].find(",skipped") != std::string::npos);
}

TEST_CASE("usage errors") {
    TempDir dir("excesslab_cli_usage");
    std::ofstream(dir.path / "empty.json") << R"({"blockLengths": []})";
    CHECK(run({"exact", "--config", (dir.path / "empty.json").string(), "--out", dir.path.string()}) == 2);
    CHECK(run({"exact", "--alpha", "3", "--out", dir.path.string()}) == 2);
    CHECK(run({"exact", "--process", "hpm9"}) == 2);
    CHECK(run({"nonsense"}) == 2);
    CHECK(run({}) == 2);
}

TEST_CASE("verify subcommand") {
    TempDir dir("excesslab_cli_verify");
    std::ofstream(dir.path / "cfg.json") << R"({"decoderWindows": 20000})";
    const std::string cfg = (dir.path / "cfg.json").string();
    CHECK(run({"verify", "--config", cfg, "--process", "hpm2", "--n", "4,6", "--out", dir.path.string()}) == 0);
    auto j = read_json(dir.path / "verify.json");
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 6);

    CHECK(run({"verify", "--config", cfg, "--process", "hpm2", "--n", "4,6", "--out", dir.path.string(),
               "--inject-decoder-fault"}) == 1);
    j = read_json(dir.path / "verify.json");
    CHECK(j["passed"] == false);
    for (const auto& c : j["checks"])
        if (c["name"] == "decoder_agreement") CHECK(c["passed"] == false);
}

TEST_CASE("fit subcommand picks the regressor by class") {
    TempDir dir("excesslab_cli_fit");
    CHECK(run({"fit", "--process", "hmc", "--alpha", "2", "--n", "8:20", "--out", dir.path.string()}) == 0);
    auto j = read_json(dir.path / "fit.json");
    CHECK(j["report"]["regressor"] == "log");
    CHECK(j["report"]["predictedClass"] == "log");
    CHECK(run({"fit", "--process", "hpm1", "--alpha", "2", "--n", "8:20", "--out", dir.path.string()}) == 0);
    CHECK(read_json(dir.path / "fit.json")["report"]["regressor"] == "loglog");
    CHECK(run({"fit", "--process", "hmc", "--n", "8:20", "--out", dir.path.string()}) == 0);
    CHECK(read_json(dir.path / "fit.json")["report"]["regressor"] == "powerLaw");
    CHECK(lines(dir.path / "fit.csv").size() == 14);
}

TEST_CASE("estimate subcommand is reproducible") {
    TempDir dir("excesslab_cli_estimate");
    std::ofstream(dir.path / "cfg.json") << R"({"trajectories": 500, "bootstrapResamples": 20})";
    const std::vector<std::string> args{"estimate", "--config", (dir.path / "cfg.json").string(), "--process", "hpm2",
                                        "--n", "3,5", "--seed", "7", "--out", dir.path.string()};
    CHECK(run(args) == 0);
    const auto first = lines(dir.path / "estimate.csv");
    CHECK(run(args) == 0);
    CHECK(lines(dir.path / "estimate.csv") == first);
    REQUIRE(first.size() == 3);
    CHECK(first[1].find(",pooled,") != std::string::npos);
    CHECK(read_json(dir.path / "estimate.json")["rows"][0]["regime"] == "pooled");
}
