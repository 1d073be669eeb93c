#include "excesslab/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "excesslab/analysis.hpp"
#include "excesslab/decoder.hpp"
#include "excesslab/exact.hpp"
#include "excesslab/sampling.hpp"
#include "excesslab/series.hpp"

namespace excesslab {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::ofstream open_output(const RunConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.outputDir);
    const auto path = c.outputDir / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void write_json(const RunConfig& c, const std::string& name, const json& body) {
    auto out = open_output(c, name);
    out << body.dump(2) << '\n';
}

json envelope(const RunConfig& c, const std::string& command) {
    return {{"command", command}, {"version", library_version()}, {"config", to_json(c)}};
}

std::string fmt(double x) { return format_double(x); }

EnumerationOptions engine_options(const RunConfig& c) {
    EnumerationOptions o;
    o.levelCutoff = c.levelCutoff;
    o.pruneEps = c.pruneEps;
    o.pathBudget = c.pathBudget;
    o.entryBudget = c.entryBudget;
    o.analyticTail = c.analyticTail && c.process == ProcessKind::HPM1;
    return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- verify checks ---------------------------------------------------------

struct Check {
    std::string name;
    bool passed = true;
    json details = json::array();

    void fail(json detail) {
        passed = false;
        details.push_back(std::move(detail));
    }
};

Check check_lemma_brackets() {
    Check c{"lemma_brackets"};
    for (double a : {1.2, 1.5, 1.8, 2.0}) {
        const Alpha alpha(a);
        for (std::uint64_t n : {std::uint64_t{2}, std::uint64_t{16}, std::uint64_t{1} << 10, std::uint64_t{1} << 20}) {
            KahanSum partial;
            for (std::uint64_t m = 2; m <= n; ++m) {
                const double lg = std::log2(static_cast<double>(m));
                partial += 1.0 / (static_cast<double>(m) * std::pow(lg, a - 1.0));
            }
            const LemmaBracket p = lemma1_partial(alpha, static_cast<double>(n));
            if (!p.contains(partial.value()))
                c.fail({{"bracket", "partial"}, {"alpha", a}, {"n", n}, {"sum", partial.value()}});
            // Telescoping: tail(n) - tail(16 n) brackets the finite sum.
            const std::uint64_t far = n << 4;
            const Interval finite = direct_sum(alpha, n, far - 1);
            const LemmaBracket t0 = lemma1_tail(alpha, static_cast<double>(n));
            const LemmaBracket t1 = lemma1_tail(alpha, static_cast<double>(far));
            if (!(t0.lower - t1.upper <= finite.hi && finite.lo <= t0.upper - t1.lower))
                c.fail({{"bracket", "tail"}, {"alpha", a}, {"n", n}, {"sum", finite.mid()}});
        }
    }
    return c;
}

Check check_decoders(const RunConfig& cfg, const ProcessModel& model) {
    Check c{"decoder_agreement"};
    std::uint64_t windows = 0, disagreements = 0, hiddenMismatches = 0;
    for (unsigned n : cfg.blockLengths) {
        if (2 * n > Block::kMaxLength) continue;
        const std::size_t perTrajectory = model.kind() == ProcessKind::HMC ? cfg.decoderWindows : 8;
        const std::size_t trajectories = (cfg.decoderWindows + perTrajectory - 1) / perTrajectory;
        for (std::size_t t = 0; t < trajectories; ++t) {
            const Trajectory traj =
                sample_trajectory(model, 2 * n + perTrajectory - 1, Rng::derive(cfg.seeds.front(), t * 131 + n).seed(), true);
            for (std::size_t i = 0; i < perTrajectory; ++i) {
                const BlockPair w = split_window(std::span(traj.symbols).subspan(i, 2 * n));
                const DnValue a = decode_past(model.kind(), w.past);
                const DnValue b = decode_future(model.kind(), w.future);
                const DnValue truth = dn_from_hidden(model.kind(), (*traj.hidden)[i + n - 1], n);
                ++windows;
                if (a != b && disagreements++ < 5)
                    c.fail({{"n", n}, {"past", w.past.to_string()}, {"future", w.future.to_string()},
                            {"from_past", a}, {"from_future", b}});
                if (a != truth && hiddenMismatches++ < 5)
                    c.fail({{"n", n}, {"past", w.past.to_string()}, {"decoded", a}, {"hidden_truth", truth}});
            }
        }
    }
    c.details.push_back({{"windows", windows}, {"disagreements", disagreements}, {"hidden_mismatches", hiddenMismatches}});
    c.passed = disagreements == 0 && hiddenMismatches == 0;
    return c;
}

struct ExactPoint {
    unsigned n = 0;
    MIResult mi;
};

// ---- subcommands -------------------------------------------------------------

std::vector<unsigned> parse_lengths_or_throw(const std::string& text) {
    try {
        return parse_block_lengths(text);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

}  // namespace

void RunConfig::validate() const {
    (void)Alpha(alpha);
    if (blockLengths.empty()) throw UsageError("blockLengths must not be empty");
    for (std::size_t i = 0; i < blockLengths.size(); ++i) {
        if (blockLengths[i] < 1 || blockLengths[i] > Block::kMaxLength)
            throw UsageError("block lengths must lie in 1..64");
        if (i > 0 && blockLengths[i] <= blockLengths[i - 1]) throw UsageError("blockLengths must be increasing");
    }
    if (!(pruneEps >= 0.0 && pruneEps < 1.0)) throw UsageError("pruneEps must lie in [0, 1)");
    if (levelCutoff < 2) throw UsageError("levelCutoff must be >= 2");
    if (seeds.empty()) throw UsageError("seeds must not be empty");
    if (trajectories < 1) throw UsageError("trajectories must be >= 1");
}

json to_json(const RunConfig& c) {
    return {{"process", to_string(c.process)},
            {"alpha", c.alpha},
            {"blockLengths", c.blockLengths},
            {"levelCutoff", c.levelCutoff},
            {"pruneEps", c.pruneEps},
            {"seeds", c.seeds},
            {"estimator", to_string(c.estimator)},
            {"outputDir", c.outputDir.string()},
            {"analyticTail", c.analyticTail},
            {"pathBudget", c.pathBudget},
            {"entryBudget", c.entryBudget},
            {"trajectories", c.trajectories},
            {"trajectoryLength", c.trajectoryLength},
            {"bootstrapResamples", c.bootstrapResamples},
            {"decoderWindows", c.decoderWindows}};
}

RunConfig config_from_json(const json& j, RunConfig c) {
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "process") c.process = parse_process_kind(value.get<std::string>());
        else if (key == "alpha") c.alpha = value.get<double>();
        else if (key == "blockLengths") {
            if (value.is_string()) c.blockLengths = parse_lengths_or_throw(value.get<std::string>());
            else c.blockLengths = value.get<std::vector<unsigned>>();
        } else if (key == "levelCutoff") c.levelCutoff = value.get<std::uint64_t>();
        else if (key == "pruneEps") c.pruneEps = value.get<double>();
        else if (key == "seeds") c.seeds = value.get<std::vector<std::uint64_t>>();
        else if (key == "estimator") c.estimator = parse_estimator_method(value.get<std::string>());
        else if (key == "outputDir") c.outputDir = value.get<std::string>();
        else if (key == "analyticTail") c.analyticTail = value.get<bool>();
        else if (key == "pathBudget") c.pathBudget = value.get<std::uint64_t>();
        else if (key == "entryBudget") c.entryBudget = value.get<std::uint64_t>();
        else if (key == "trajectories") c.trajectories = value.get<std::size_t>();
        else if (key == "trajectoryLength") c.trajectoryLength = value.get<std::size_t>();
        else if (key == "bootstrapResamples") c.bootstrapResamples = value.get<unsigned>();
        else if (key == "decoderWindows") c.decoderWindows = value.get<std::size_t>();
        else throw UsageError("unknown config key '" + key + "'");
    }
    return c;
}

std::vector<unsigned> parse_block_lengths(const std::string& text) {
    std::vector<unsigned> out;
    std::stringstream ss(text);
    std::string item;
    auto number = [](const std::string& s) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad block length '" + s + "'");
        return static_cast<unsigned>(v);
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream is(item);
        std::string p;
        while (std::getline(is, p, ':')) parts.push_back(p);
        if (parts.size() == 1) {
            out.push_back(number(parts[0]));
        } else if (parts.size() == 2 || parts.size() == 3) {
            const unsigned a = number(parts[0]), b = number(parts[1]);
            const unsigned step = parts.size() == 3 ? number(parts[2]) : 1;
            if (step == 0 || a > b) throw std::invalid_argument("bad range '" + item + "'");
            for (unsigned v = a; v <= b; v += step) out.push_back(v);
        } else {
            throw std::invalid_argument("bad block length list '" + text + "'");
        }
    }
    return out;
}

std::string library_version() { return EXCESSLAB_VERSION; }

int cmd_exact(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const ProcessModel model(cfg.process, Alpha(cfg.alpha));
    auto csv = open_output(cfg, "exact.csv");
    csv << "kind,alpha,n,value,err_low,err_high,lower,upper,entries,pruned_mass,mass_uncertainty,path_extensions,"
           "seconds,status\n";
    json rows = json::array();
    for (unsigned n : cfg.blockLengths) {
        const auto t0 = std::chrono::steady_clock::now();
        csv << to_string(cfg.process) << ',' << fmt(cfg.alpha) << ',' << n << ',';
        try {
            const JointBlockTable t = enumerate_joint(model, n, engine_options(cfg));
            const MIResult mi = block_mi(t);
            const double secs = seconds_since(t0);
            csv << fmt(mi.value) << ',' << fmt(mi.errLow) << ',' << fmt(mi.errHigh) << ',' << fmt(mi.lower()) << ','
                << fmt(mi.upper()) << ',' << t.entries.size() << ',' << fmt(t.prunedMass) << ','
                << fmt(t.massUncertainty) << ',' << t.pathExtensions << ',' << fmt(secs) << ",ok\n";
            rows.push_back({{"n", n}, {"value", mi.value}, {"err_low", mi.errLow}, {"err_high", mi.errHigh},
                            {"entries", t.entries.size()}, {"status", "ok"}});
            log << "n=" << n << "  E=" << mi.value << "  [" << mi.lower() << ", " << mi.upper() << "]  ("
                << t.entries.size() << " entries, " << secs << " s)\n";
        } catch (const BudgetExceeded& e) {
            csv << ",,,,,,,,," << fmt(seconds_since(t0)) << ",skipped\n";
            rows.push_back({{"n", n}, {"status", "skipped"}, {"reason", e.what()}});
            log << "n=" << n << "  skipped: " << e.what() << '\n';
        }
        csv.flush();
    }
    json out = envelope(cfg, "exact");
    out["rows"] = rows;
    write_json(cfg, "exact.json", out);
    return kExitOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const ProcessModel model(cfg.process, Alpha(cfg.alpha));
    auto csv = open_output(cfg, "estimate.csv");
    csv << "kind,alpha,n,seed,method,regime,estimate,std_error,windows,plugin,support_joint,support_past,"
           "support_future\n";
    json rows = json::array();
    EstimatorOptions opt;
    opt.method = cfg.estimator;
    opt.bootstrapResamples = cfg.bootstrapResamples;
    for (unsigned n : cfg.blockLengths) {
        for (std::uint64_t seed : cfg.seeds) {
            EstimatorReport r;
            if (cfg.process == ProcessKind::HMC) {
                const std::size_t len = cfg.trajectoryLength ? cfg.trajectoryLength : 1'000'000;
                r = estimate_block_mi(sample_trajectory(model, len, seed), n, opt);
            } else {
                // Nonergodic: the ensemble quantity needs many independent trajectories.
                const std::size_t len = cfg.trajectoryLength ? cfg.trajectoryLength : 16 * static_cast<std::size_t>(n);
                const auto trajs = sample_trajectories(model, cfg.trajectories, len, seed);
                r = estimate_block_mi_pooled(trajs, n, opt);
            }
            csv << to_string(cfg.process) << ',' << fmt(cfg.alpha) << ',' << n << ',' << seed << ','
                << to_string(r.method) << ',' << to_string(r.regime) << ',' << fmt(r.pointEstimate) << ','
                << fmt(r.stdError) << ',' << r.sampleCount << ',' << fmt(r.plugin) << ',' << r.supportJoint << ','
                << r.supportPast << ',' << r.supportFuture << '\n';
            rows.push_back({{"n", n}, {"seed", seed}, {"estimate", r.pointEstimate}, {"std_error", r.stdError},
                            {"regime", to_string(r.regime)}, {"windows", r.sampleCount}});
            log << "n=" << n << " seed=" << seed << "  " << to_string(r.method) << " (" << to_string(r.regime)
                << ") = " << r.pointEstimate << " +- " << r.stdError << '\n';
        }
    }
    json out = envelope(cfg, "estimate");
    out["rows"] = rows;
    write_json(cfg, "estimate.json", out);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const Alpha alpha(cfg.alpha);
    const ProcessModel model(cfg.process, alpha);
    std::vector<Check> checks;
    checks.push_back(check_lemma_brackets());
    checks.push_back(check_decoders(cfg, model));

    Check identity{"endn_identity"}, sandwich{"sandwich"}, triple{"triple_information"}, mono{"monotonicity"};
    std::vector<ExactPoint> points;
    for (unsigned n : cfg.blockLengths) {
        JointBlockTable t;
        try {
            t = enumerate_joint(model, n, engine_options(cfg));
        } catch (const BudgetExceeded& e) {
            log << "n=" << n << ": skipped (" << e.what() << ")\n";
            continue;
        }
        IdentityResidual r;
        try {
            r = en_dn_identity_check(t, cfg.process);
        } catch (const LabelDisagreement& e) {
            identity.fail({{"n", n}, {"error", e.what()}});
            continue;
        }
        if (!(std::abs(r.residual) <= r.certifiedWidth + 1e-9))
            identity.fail({{"n", n}, {"residual", r.residual}, {"width", r.certifiedWidth}});
        points.push_back({n, r.blockMi});

        const MIResult dn = dn_entropy_closed_form(cfg.process, alpha, std::max(n, 2u));
        const Interval t1 = theorem1_bound(cfg.process, alpha, n);
        const Interval dp = state_entropy_bound(cfg.process, alpha, n, cfg.levelCutoff);
        if (!(dn.lower() <= r.blockMi.upper()))
            sandwich.fail({{"n", n}, {"relation", "H(D) <= E"}, {"H_D", dn.value}, {"E_upper", r.blockMi.upper()}});
        if (!(r.blockMi.lower() <= t1.hi))
            sandwich.fail({{"n", n}, {"relation", "E <= bound"}, {"E_lower", r.blockMi.lower()}, {"bound", t1.hi}});
        if (!(r.blockMi.lower() <= dp.hi))
            sandwich.fail(
                {{"n", n}, {"relation", "E <= truncated bound"}, {"E_lower", r.blockMi.lower()}, {"bound", dp.hi}});

        for (const auto& pred : observable_predicates(model.alphabet_size())) {
            const double ti = triple_information(t, pred.event);
            if (!(std::abs(ti) <= 1.0 + 1e-9)) triple.fail({{"n", n}, {"predicate", pred.name}, {"value", ti}});
        }
        log << "n=" << n << ": E=" << r.blockMi.value << " residual=" << r.residual << " H(D)=" << dn.value
            << " bound=" << t1.hi << '\n';
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (!(points[i].mi.lower() <= points[j].mi.upper()))
                mono.fail({{"n_low", points[i].n}, {"n_high", points[j].n}});
    for (Check* c : {&identity, &sandwich, &triple, &mono}) checks.push_back(std::move(*c));

    json ledger = envelope(cfg, "verify");
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        ledger["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"details", c.details}});
        log << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    }
    ledger["passed"] = all;
    write_json(cfg, "verify.json", ledger);
    return all ? kExitOk : kExitCheckFailed;
}

int cmd_fit(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const Alpha alpha(cfg.alpha);
    const ProcessModel model(cfg.process, alpha);
    std::vector<ReportRow> rows;
    std::vector<RatePoint> points;
    for (unsigned n : cfg.blockLengths) {
        ReportRow row{to_string(cfg.process), cfg.alpha, n, 0.0, 0.0, 0.0, ""};
        if (cfg.process == ProcessKind::HMC) {
            const MIResult h = dn_entropy_closed_form(cfg.process, alpha, std::max(n, 2u));
            row.value = h.value, row.errLow = h.errLow, row.errHigh = h.errHigh, row.source = "closed_form";
        } else {
            try {
                const MIResult e = block_mi(enumerate_joint(model, n, engine_options(cfg)));
                row.value = e.value, row.errLow = e.errLow, row.errHigh = e.errHigh, row.source = "exact";
            } catch (const BudgetExceeded& ex) {
                log << "n=" << n << ": skipped (" << ex.what() << ")\n";
                continue;
            }
        }
        rows.push_back(row);
        points.push_back({static_cast<double>(n), row.value});
        log << "n=" << n << "  " << row.source << "  " << row.value << '\n';
    }
    Regressor regressor = Regressor::PowerLaw;
    double beta = 0.0;
    switch (predicted_class(cfg.process, alpha)) {
        case RateClass::Poly: regressor = Regressor::PowerLaw; break;
        case RateClass::Log: regressor = Regressor::Log; break;
        case RateClass::LogPow: regressor = Regressor::LogPow, beta = 2.0 - cfg.alpha; break;
        case RateClass::LogLog: regressor = Regressor::LogLog; break;
    }
    RateFitReport report;
    try {
        report = fit_rate(points, regressor, beta);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("fit: ") + e.what());
    }
    annotate(report, cfg.process, alpha);
    {
        auto csv = open_output(cfg, "fit.csv");
        write_rows_csv(rows, csv);
    }
    json out = envelope(cfg, "fit");
    out["report"] = {{"kind", report.kind},
                     {"alpha", report.alpha},
                     {"fittedSlope", report.slope},
                     {"intercept", report.intercept},
                     {"rSquared", report.rSquared},
                     {"predictedClass", to_string(report.predictedClass)},
                     {"predictedExponent", report.predictedExponent},
                     {"regressor", report.regressor},
                     {"fitWindow", {report.fitFrom, report.fitTo}},
                     {"points", report.points}};
    write_json(cfg, "fit.json", out);
    log << "fit " << report.regressor << ": slope=" << report.slope << " intercept=" << report.intercept
        << " R^2=" << report.rSquared << " (predicted class " << to_string(report.predictedClass) << ")\n";
    return kExitOk;
}

int cmd_info(const RunConfig& cfg, std::ostream& out) {
    const Alpha alpha(cfg.alpha);
    const Interval c = normalization_constant(alpha);
    const Interval d = branch_normalization_constant(alpha);
    json info = {{"version", library_version()},
                 {"alpha", cfg.alpha},
                 {"C", {c.lo, c.hi}},
                 {"D", {d.lo, d.hi}},
                 {"threads", default_thread_count()},
                 {"predictedClass",
                  {{"hpm1", to_string(predicted_class(ProcessKind::HPM1, alpha))},
                   {"hpm2", to_string(predicted_class(ProcessKind::HPM2, alpha))},
                   {"hmc", to_string(predicted_class(ProcessKind::HMC, alpha))}}}};
    out << info.dump(2) << '\n';
    return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"excesslab: block mutual information of hidden Markov examples"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.footer("Environment: EXCESSLAB_THREADS caps the number of worker threads.");

    std::string configPath, process, lengths, estimator, out;
    double alpha = 0;
    std::uint64_t levelCutoff = 0;
    double pruneEps = -1;
    std::vector<std::uint64_t> seeds;
    bool injectFault = false;
    app.add_option("--config", configPath, "JSON run config; flags given on the command line override it");
    app.add_option("--process", process, "hpm1, hpm2 or hmc (default hpm1)");
    app.add_option("--alpha", alpha, "level-law exponent in (1, 2] (default 1.5)");
    app.add_option("--n", lengths, "block lengths, e.g. 4,8,12 or 8:28 or 8:28:4 (default 4,8)");
    app.add_option("--level-cutoff", levelCutoff, "largest enumerated level (default 1024)");
    app.add_option("--prune-eps", pruneEps, "path pruning threshold for hmc, in [0, 1) (default 0)");
    app.add_option("--seed", seeds, "seeds (repeatable; default 1)");
    app.add_option("--estimator", estimator, "plugin or millerMadow (default millerMadow)");
    app.add_option("--out", out, "output directory (default excesslab-out)");

    auto* exact = app.add_subcommand("exact", "certified E(n) from the exact engine -> exact.csv");
    auto* estimate = app.add_subcommand("estimate", "sampled estimates of E(n) -> estimate.csv");
    auto* verify = app.add_subcommand("verify", "invariant suite -> verify.json; exit 1 if any check fails");
    verify->add_flag("--inject-decoder-fault", injectFault, "test hook: corrupt the future-side decoders");
    auto* fit = app.add_subcommand("fit", "growth-rate fit against the predicted class -> fit.json");
    auto* info = app.add_subcommand("info", "version, constants and thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig cfg;
        if (!configPath.empty()) {
            std::ifstream in(configPath);
            if (!in) throw UsageError("cannot read config " + configPath);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw UsageError("config " + configPath + ": " + e.what());
            }
            cfg = config_from_json(j, cfg);
        }
        if (!process.empty()) cfg.process = parse_process_kind(process);
        if (alpha != 0) cfg.alpha = alpha;
        if (!lengths.empty()) cfg.blockLengths = parse_lengths_or_throw(lengths);
        if (levelCutoff != 0) cfg.levelCutoff = levelCutoff;
        if (pruneEps >= 0) cfg.pruneEps = pruneEps;
        if (!seeds.empty()) cfg.seeds = seeds;
        if (!estimator.empty()) cfg.estimator = parse_estimator_method(estimator);
        if (!out.empty()) cfg.outputDir = out;
        cfg.validate();

        if (*info) return cmd_info(cfg, std::cout);
        if (*exact) return cmd_exact(cfg, std::cerr);
        if (*estimate) return cmd_estimate(cfg, std::cerr);
        if (*fit) return cmd_fit(cfg, std::cerr);
        if (*verify) {
            detail::set_decoder_fault(injectFault);
            const int rc = cmd_verify(cfg, std::cerr);
            detail::set_decoder_fault(false);
            return rc;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace excesslab
