#include <doctest.h>

#include <cmath>

#include "excesslab/model.hpp"
#include "excesslab/series.hpp"
#include "oracles.hpp"

using namespace excesslab;

TEST_CASE("binary length and digits") {
    CHECK(binary_length(2) == 2);
    CHECK(binary_length(7) == 3);
    CHECK(binary_length(8) == 4);
    CHECK(binary_length(1) == 1);
    CHECK_THROWS_AS(binary_length(0), std::invalid_argument);

    CHECK(binary_digit(6, 1) == 1);
    CHECK(binary_digit(6, 3) == 0);
    CHECK(binary_digit(5, 2) == 0);
    CHECK_THROWS(binary_digit(5, 4));
    CHECK_THROWS(binary_digit(5, 0));

    for (std::uint64_t m = 1; m < 5000; m += 7) {
        const std::string b = oracle::binary(m);
        REQUIRE(binary_length(m) == b.size());
        for (std::uint64_t k = 1; k <= b.size(); ++k) CHECK(binary_digit(m, k) == b[k - 1] - '0');
    }
}

TEST_CASE("alpha outside (1, 2] is rejected") {
    CHECK_THROWS_AS(Alpha(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Alpha(2.0001), std::invalid_argument);
    CHECK_THROWS_AS(Alpha(std::nan("")), std::invalid_argument);
    CHECK_NOTHROW(Alpha(2.0));
}

// Direct summation to M with the tail bracketed by the integral, independent
// of the library's series code.
static std::pair<double, double> c_oracle(double alpha, std::uint64_t M) {
    long double s = 0.0L;
    for (std::uint64_t m = 2; m < M; ++m) s += oracle::f(alpha, m);
    const double lg = std::log2(static_cast<double>(M));
    const double T = std::log(2.0) / (alpha - 1.0) * std::pow(lg, 1.0 - alpha);
    const double lo = static_cast<double>(s) + T, hi = lo + oracle::f(alpha, M);
    return {1.0 / hi, 1.0 / lo};
}

TEST_CASE("normalization constant") {
    SUBCASE("alpha = 2") {
        const Interval c = normalization_constant(Alpha(2.0));
        CHECK(c.width() <= 1e-6);
        const auto [lo, hi] = c_oracle(2.0, std::uint64_t{1} << 26);
        CHECK(c.overlaps(Interval(lo, hi)));
    }
    SUBCASE("alpha = 1.5") {
        const Interval c = normalization_constant(Alpha(1.5));
        CHECK(c.width() <= 1e-4);
        const auto [lo, hi] = c_oracle(1.5, std::uint64_t{1} << 26);
        CHECK(c.overlaps(Interval(lo, hi)));
    }
    SUBCASE("enclosure narrows with the cutoff") {
        const Interval a = normalization_constant(Alpha(1.5), 100'000);
        const Interval b = normalization_constant(Alpha(1.5), 10'000'000);
        CHECK(b.width() < a.width());
        CHECK(a.overlaps(b));
    }
}

TEST_CASE("level probabilities") {
    const ProcessModel two(ProcessKind::HPM1, Alpha(2.0));
    const Interval r = level_probability(two, 2) / level_probability(two, 4);
    CHECK(r.contains(8.0));
    CHECK(level_probability(two, 2).overlaps(two.normC() / Interval(2.0)));
    CHECK_THROWS_AS(level_probability(two, 1), std::invalid_argument);

    for (double a : {1.2, 1.5, 2.0}) {
        const ProcessModel m(ProcessKind::HPM2, Alpha(a));
        const Interval ratio = level_probability(m, 2) / level_probability(m, 4);
        CHECK(ratio.contains(std::pow(2.0, a + 1.0)));
        // Head plus tail covers the unit mass.
        const Interval head = m.normC() * direct_sum(m.alpha(), 2, 1000);
        CHECK((head + level_tail_probability(m, 1000)).contains(1.0));
    }
}

TEST_CASE("stationary probabilities") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(1.5));
    CHECK(stationary_probability(h1, {3, 1}).overlaps(stationary_probability(h1, {3, 3})));
    CHECK_THROWS(stationary_probability(h1, {3, 4}));

    const ProcessModel hmc(ProcessKind::HMC, Alpha(1.5));
    CHECK(hmc.phases(5) == 9);
    CHECK(stationary_probability(hmc, {5, 4}).overlaps(level_probability(hmc, 5) / Interval(9.0)));

    const ProcessModel h2(ProcessKind::HPM2, Alpha(1.5));
    Interval sum(0.0);
    for (std::uint64_t k = 1; k <= 3; ++k) sum += stationary_probability(h2, {5, k});
    CHECK(sum.overlaps(level_probability(h2, 5)));
}

TEST_CASE("transitions") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(1.5));
    auto t = transition_distribution(h1, {3, 2}, 100);
    REQUIRE(t.successors.size() == 1);
    CHECK(t.successors[0].first == StateId{3, 3});
    CHECK(t.successors[0].second.contains(1.0));
    t = transition_distribution(h1, {3, 3}, 100);
    REQUIRE(t.successors.size() == 1);
    CHECK(t.successors[0].first == StateId{3, 1});

    const ProcessModel hmc(ProcessKind::HMC, Alpha(2.0));
    CHECK((branch_probability(hmc, 2) / branch_probability(hmc, 4)).contains(12.0));
    t = transition_distribution(hmc, {4, 4}, 100);
    REQUIRE(t.successors.size() == 1);
    CHECK(t.successors[0].first == StateId{4, 5});

    // Outgoing mass from a branch state sums to one within the enclosure.
    for (std::uint64_t cutoff : {std::uint64_t{64}, std::uint64_t{4096}}) {
        const auto b = transition_distribution(hmc, {4, 9}, cutoff);
        CHECK(b.successors.size() == cutoff - 1);
        Interval total = b.tailMass;
        for (const auto& [s, p] : b.successors) {
            CHECK(s.phase == 1);
            total += p;
        }
        CHECK(total.contains(1.0));
    }
}

TEST_CASE("emission words") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(1.5));
    CHECK(emission(h1, {3, 1}) == 0);
    CHECK(emission(h1, {3, 3}) == 1);

    const ProcessModel h2(ProcessKind::HPM2, Alpha(1.5));
    CHECK(level_word(h2, 5) == std::vector<Symbol>{2, 0, 1});

    const ProcessModel hmc(ProcessKind::HMC, Alpha(1.5));
    CHECK(level_word(hmc, 5) == std::vector<Symbol>{2, 0, 1, 3, 3, 3, 3, 0, 1});

    for (std::uint64_t m = 2; m < 3000; m += 13) {
        const auto w = level_word(hmc, m);
        const std::uint64_t s = binary_length(m);
        REQUIRE(w.size() == 3 * s);
        CHECK(w[0] == 2);
        CHECK(std::count(w.begin(), w.end(), Symbol{3}) == static_cast<long>(s + 1));
        std::string text;
        for (Symbol x : w) text += static_cast<char>('0' + x);
        CHECK(text == oracle::hmc_word(m));
        for (Symbol x : level_word(h2, m)) CHECK(x < 3);
    }
}

TEST_CASE("process kind names") {
    CHECK(parse_process_kind("hpm2") == ProcessKind::HPM2);
    CHECK(to_string(ProcessKind::HMC) == "hmc");
    CHECK_THROWS_AS(parse_process_kind("hpm3"), std::invalid_argument);
}
