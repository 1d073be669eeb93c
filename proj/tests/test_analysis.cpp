#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "excesslab/analysis.hpp"
#include "excesslab/decoder.hpp"
#include "excesslab/exact.hpp"
#include "oracles.hpp"

using namespace excesslab;

namespace {

std::vector<RatePoint> synthetic(double (*g)(double), unsigned from, unsigned to) {
    std::vector<RatePoint> pts;
    for (unsigned n = from; n <= to; ++n) pts.push_back({double(n), g(n)});
    return pts;
}

}  // namespace

TEST_CASE("rate fits on synthetic data") {
    auto pow = synthetic([](double n) { return 3.0 * std::sqrt(n); }, 4, 64);
    RateFitReport r = fit_rate(pow, Regressor::PowerLaw);
    CHECK(r.slope == doctest::Approx(0.5));
    CHECK(r.rSquared == doctest::Approx(1.0));
    CHECK(std::exp(r.intercept) == doctest::Approx(3.0));
    CHECK(r.points == 61);
    CHECK(r.fitFrom == 4.0);
    CHECK(r.fitTo == 64.0);

    auto lg = synthetic([](double n) { return 7.0 * std::log2(n) + 1.0; }, 4, 64);
    r = fit_rate(lg, Regressor::Log);
    CHECK(r.slope == doctest::Approx(7.0));
    CHECK(r.intercept == doctest::Approx(1.0));
    CHECK(r.rSquared == doctest::Approx(1.0));

    auto lp = synthetic([](double n) { return 2.0 * std::pow(std::log2(n), 0.5) - 1.0; }, 4, 64);
    r = fit_rate(lp, Regressor::LogPow, 0.5);
    CHECK(r.slope == doctest::Approx(2.0));
    CHECK(fit_rate(lp, Regressor::PowerLaw).rSquared < r.rSquared);

    auto ll = synthetic([](double n) { return 5.0 * std::log2(std::log2(n)); }, 4, 64);
    CHECK(fit_rate(ll, Regressor::LogLog).slope == doctest::Approx(5.0));
    CHECK(fit_rate(ll, Regressor::LogLog).rSquared > fit_rate(ll, Regressor::Log).rSquared);

    // The same regression by an independent least-squares routine.
    std::vector<double> x, y;
    for (const auto& p : lg) x.push_back(std::log2(p.n)), y.push_back(p.value + std::sin(p.n));
    std::vector<RatePoint> noisy;
    for (std::size_t i = 0; i < x.size(); ++i) noisy.push_back({lg[i].n, y[i]});
    const oracle::Line ref = oracle::least_squares(x, y);
    r = fit_rate(noisy, Regressor::Log);
    CHECK(r.slope == doctest::Approx(ref.slope));
    CHECK(r.rSquared == doctest::Approx(ref.r2));
}

TEST_CASE("rate fit rejects bad input") {
    std::vector<RatePoint> three{{4, 1}, {5, 2}, {6, 3}};
    CHECK_THROWS_AS(fit_rate(three, Regressor::Log), std::invalid_argument);
    std::vector<RatePoint> unordered{{4, 1}, {6, 2}, {5, 3}, {7, 4}};
    CHECK_THROWS_AS(fit_rate(unordered, Regressor::Log), std::invalid_argument);
    std::vector<RatePoint> atTwo{{2, 1}, {3, 2}, {4, 3}, {5, 4}};
    CHECK_THROWS_AS(fit_rate(atTwo, Regressor::LogLog), std::invalid_argument);
    std::vector<RatePoint> nonpositive{{3, 0}, {4, 2}, {5, 3}, {6, 4}};
    CHECK_THROWS_AS(fit_rate(nonpositive, Regressor::PowerLaw), std::invalid_argument);
}

TEST_CASE("predicted classes") {
    CHECK(predicted_class(ProcessKind::HPM1, Alpha(1.5)) == RateClass::LogPow);
    CHECK(predicted_class(ProcessKind::HPM1, Alpha(2.0)) == RateClass::LogLog);
    CHECK(predicted_class(ProcessKind::HPM2, Alpha(1.5)) == RateClass::Poly);
    CHECK(predicted_class(ProcessKind::HMC, Alpha(2.0)) == RateClass::Log);
    RateFitReport r;
    annotate(r, ProcessKind::HMC, Alpha(1.5));
    CHECK(r.kind == "hmc");
    CHECK(r.predictedExponent == doctest::Approx(0.5));
    CHECK(to_string(RateClass::LogPow) == "logPow");
}

TEST_CASE("upper-bound curve") {
    SUBCASE("alpha 2 grows like log n") {
        std::vector<RatePoint> pts;
        for (unsigned n = 4; n <= 64; n += 4) pts.push_back({double(n), theorem1_bound(ProcessKind::HPM1, Alpha(2.0), n).hi});
        CHECK(fit_rate(pts, Regressor::Log).rSquared >= 0.99);
    }
    SUBCASE("alpha 1.5 grows like n^{1/2}") {
        std::vector<RatePoint> pts;
        for (unsigned n = 8; n <= 128; n += 8) pts.push_back({double(n), theorem1_bound(ProcessKind::HPM1, Alpha(1.5), n).hi});
        const RateFitReport r = fit_rate(pts, Regressor::PowerLaw);
        CHECK(r.slope >= 0.4);
        CHECK(r.slope <= 0.6);
    }
    SUBCASE("enclosures are proper and increase with the threshold") {
        for (ProcessKind k : {ProcessKind::HPM1, ProcessKind::HPM2, ProcessKind::HMC}) {
            const Interval a = state_entropy_bound(k, Alpha(1.5), 8, 256);
            CHECK(a.lo <= a.hi);
            CHECK(std::isfinite(a.hi));
            const Interval b = theorem1_bound(k, Alpha(1.5), 40);
            CHECK(b.lo <= b.hi);
        }
    }
    SUBCASE("truncated state entropy matches a direct sum") {
        const Alpha a(1.5);
        const double C = normalization_constant(a).mid();
        for (ProcessKind k : {ProcessKind::HPM1, ProcessKind::HPM2, ProcessKind::HMC}) {
            const ProcessModel model(k, a);
            double mass = 0, h = 0;
            for (std::uint64_t m = 2; m <= 1000; ++m) {
                const double pm = C * oracle::f(1.5, m);
                const double r = double(model.phases(m));
                mass += pm;
                h -= pm * std::log2(pm / r);
            }
            const TruncatedState s = truncated_state_entropy(k, a, 1000);
            CHECK(s.mass.overlaps(Interval(mass * (1 - 1e-9), mass * (1 + 1e-9))));
            const double cond = h / mass + std::log2(mass);
            CHECK(s.entropy.lo <= cond + 1e-6);
            CHECK(cond - 1e-6 <= s.entropy.hi);
        }
    }
}

TEST_CASE("sandwich on exact points") {
    for (double al : {1.5, 2.0}) {
        const Alpha a(al);
        for (unsigned n : {4u, 8u}) {
            const auto t = enumerate_joint(ProcessModel(ProcessKind::HPM1, a), n, 4096, 0.0);
            const MIResult e = block_mi(t);
            CHECK(dn_entropy_closed_form(ProcessKind::HPM1, a, n).lower() <= e.upper());
            CHECK(e.lower() <= theorem1_bound(ProcessKind::HPM1, a, n).hi);
            CHECK(e.lower() <= state_entropy_bound(ProcessKind::HPM1, a, n, 4096).hi);
        }
    }
}

TEST_CASE("observable predicates") {
    for (unsigned k : {2u, 3u, 4u}) {
        const auto preds = observable_predicates(k);
        CHECK(preds.size() == 20);
        std::set<std::string> names;
        for (const auto& p : preds) names.insert(p.name);
        CHECK(names.size() == 20);
    }
    const auto preds = observable_predicates(3);
    const BlockPair w{Block::from_string("0120"), Block::from_string("0210")};
    int hits = 0;
    for (const auto& p : preds) hits += p.event(w);
    CHECK(hits > 0);
    CHECK(hits < 20);
}

TEST_CASE("report rows") {
    std::vector<ReportRow> rows{{"hpm1", 1.5, 8, 2.5052, 1e-9, 2e-9, "exact"}, {"hmc", 2.0, 10, 1.0 / 3.0, 0, 0, "closed_form"}};
    std::ostringstream out;
    write_rows_csv(rows, out);
    std::istringstream in(out.str());
    std::string header, first, second;
    std::getline(in, header), std::getline(in, first), std::getline(in, second);
    CHECK(header == "kind,alpha,n,value,err_low,err_high,source");
    CHECK(first.rfind("hpm1,1.5,8,2.5051999999999999,", 0) == 0);
    CHECK(std::stod(second.substr(second.find(",10,") + 4)) == 1.0 / 3.0);
    CHECK(format_double(0.1) == "0.10000000000000001");
}
