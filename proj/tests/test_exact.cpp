#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "excesslab/decoder.hpp"
#include "excesslab/exact.hpp"
#include "oracles.hpp"

using namespace excesslab;

namespace {

BlockPair pair_of(const char* past, const char* future) { return {Block::from_string(past), Block::from_string(future)}; }

JointBlockTable level_two_table(unsigned n) {
    return enumerate_joint(ProcessModel::pinned(ProcessKind::HPM1, 2), n, 1024, 0.0);
}

double mass_plus_pruned(const JointBlockTable& t) { return t.entry_mass() + t.prunedMass; }

}  // namespace

TEST_CASE("degenerate period-two table") {
    const JointBlockTable t = level_two_table(2);
    REQUIRE(t.entries.size() == 2);
    const oracle::Table got = oracle::from_library(t);
    CHECK(got.at("01|01") == doctest::Approx(0.5));
    CHECK(got.at("10|10") == doctest::Approx(0.5));
    CHECK(t.prunedMass == 0.0);
    CHECK(entropy(t).value == doctest::Approx(1.0));
    for (unsigned n : {1u, 2u, 5u}) {
        const MIResult e = block_mi(level_two_table(n));
        CHECK(e.value == doctest::Approx(1.0));
        CHECK(e.lower() <= 1.0);
        CHECK(1.0 <= e.upper());
    }
}

TEST_CASE("entropy of small tables") {
    const auto point = JointBlockTable::from_entries(1, 2, {{pair_of("0", "1"), 1.0}});
    CHECK(entropy(point).value == doctest::Approx(0.0));
    const auto coin = JointBlockTable::from_entries(1, 2, {{pair_of("0", "0"), 0.5}, {pair_of("1", "1"), 0.5}});
    CHECK(entropy(coin).value == doctest::Approx(1.0));
    CHECK(block_mi(coin).value == doctest::Approx(1.0));
    // Duplicates are merged.
    const auto merged = JointBlockTable::from_entries(1, 2, {{pair_of("0", "0"), 0.25}, {pair_of("0", "0"), 0.75}});
    CHECK(merged.entries.size() == 1);

    // Product law: past and future independent.
    std::vector<TableEntry> raw;
    const double pp[] = {0.2, 0.8}, pf[] = {0.6, 0.4};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            raw.push_back({{Block::from_string(a ? "1" : "0"), Block::from_string(b ? "1" : "0")}, pp[a] * pf[b]});
    const auto product = JointBlockTable::from_entries(1, 2, raw);
    CHECK(std::abs(block_mi(product).value) < 1e-12);
}

TEST_CASE("missing mass widens the enclosure") {
    const auto t = JointBlockTable::from_entries(1, 2, {{pair_of("0", "0"), 0.5}, {pair_of("1", "1"), 0.4999}}, 1e-4);
    const MIResult e = entropy(t);
    CHECK(e.width() > 0.0);
    CHECK(missing_mass_entropy_bound(0.0, 4.0) == 0.0);
    CHECK(missing_mass_entropy_bound(1e-3, 4.0) > missing_mass_entropy_bound(1e-4, 4.0));
}

TEST_CASE("cycle mixtures match the brute-force enumerator") {
    for (double a : {1.5, 2.0}) {
        const ProcessModel h1(ProcessKind::HPM1, Alpha(a));
        const ProcessModel h2(ProcessKind::HPM2, Alpha(a));
        for (unsigned n : {1u, 3u, 6u}) {
            CAPTURE(a);
            CAPTURE(n);
            const auto t1 = enumerate_joint(h1, n, 1024, 0.0);
            CHECK(oracle::max_difference(oracle::from_library(t1),
                                         oracle::cycle_mixture('1', a, h1.normC().mid(), n, 1024)) <= 1e-12);
            const auto t2 = enumerate_joint(h2, n, 1024, 0.0);
            CHECK(oracle::max_difference(oracle::from_library(t2),
                                         oracle::cycle_mixture('2', a, h2.normC().mid(), n, 1024)) <= 1e-12);
        }
    }
}

TEST_CASE("block information matches the oracle at n = 8") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(1.5));
    const auto t = enumerate_joint(h1, 8, 4096, 0.0);
    const double ref = oracle::mutual_information(oracle::cycle_mixture('1', 1.5, h1.normC().mid(), 8, 4096));
    CHECK(std::abs(block_mi(t).value - ref) <= 1e-10);
}

TEST_CASE("mixing copy matches the path expander") {
    for (double a : {1.5, 2.0}) {
        const ProcessModel hmc(ProcessKind::HMC, Alpha(a));
        for (unsigned n : {1u, 2u, 4u}) {
            CAPTURE(a);
            CAPTURE(n);
            const auto t = enumerate_joint(hmc, n, 32, 0.0);
            const auto ref = oracle::hmc_paths(a, hmc.normC().mid(), hmc.normD().mid(), n, 32);
            CHECK(oracle::max_difference(oracle::from_library(t), ref) <= 1e-12);
        }
    }
}

TEST_CASE("conservation") {
    for (ProcessKind k : {ProcessKind::HPM1, ProcessKind::HPM2, ProcessKind::HMC}) {
        const ProcessModel m(k, Alpha(1.5));
        for (double eps : {0.0, 1e-5}) {
            const auto t = enumerate_joint(m, k == ProcessKind::HMC ? 3 : 1, 256, eps);
            CHECK(std::abs(mass_plus_pruned(t) - 1.0) <= t.massUncertainty + 1e-12);
            for (const auto& e : t.entries) CHECK(e.probability > 0.0);
        }
    }
    EnumerationOptions o;
    o.analyticTail = true;
    const auto t = enumerate_joint(ProcessModel(ProcessKind::HPM1, Alpha(1.5)), 10, o);
    CHECK(t.prunedMass <= 1e-12);
    CHECK(std::abs(t.entry_mass() - 1.0) <= t.massUncertainty + 1e-12);
}

TEST_CASE("analytic tail agrees with a long explicit sum") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(2.0));
    EnumerationOptions o;
    o.analyticTail = true;
    const auto analytic = enumerate_joint(h1, 6, o);
    const std::uint64_t cutoff = 1 << 16;
    const auto explicitTable = enumerate_joint(h1, 6, cutoff, 0.0);
    // They differ only by the levels above the cutoff.
    const double tail = level_tail_probability(h1, cutoff).hi;
    CHECK(oracle::max_difference(oracle::from_library(analytic), oracle::from_library(explicitTable)) <= tail);
    CHECK(block_mi(analytic).width() < block_mi(explicitTable).width());
    const MIResult a = block_mi(analytic), b = block_mi(explicitTable);
    CHECK(a.lower() <= b.upper());
    CHECK(b.lower() <= a.upper());
}

TEST_CASE("pruning and budgets") {
    const ProcessModel hmc(ProcessKind::HMC, Alpha(1.5));
    const auto full = enumerate_joint(hmc, 4, 64, 0.0);
    const auto pruned = enumerate_joint(hmc, 4, 64, 1e-4);
    CHECK(pruned.entries.size() < full.entries.size());
    CHECK(pruned.prunedMass > full.prunedMass);
    CHECK(block_mi(pruned).lower() <= block_mi(full).upper());

    EnumerationOptions o;
    o.levelCutoff = 1024;
    o.pathBudget = 10'000;
    CHECK_THROWS_AS(enumerate_joint(hmc, 8, o), BudgetExceeded);
    o.pathBudget = 100'000'000;
    o.entryBudget = 10;
    CHECK_THROWS_AS(enumerate_joint(ProcessModel(ProcessKind::HPM2, Alpha(1.5)), 6, o), BudgetExceeded);

    CHECK_THROWS_AS(enumerate_joint(hmc, 0, 64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_joint(hmc, 2, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_joint(hmc, 2, 64, 1.0), std::invalid_argument);
}

TEST_CASE("conditional information") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(1.5));
    const PairLabel constantLabel = [](const BlockPair&) { return Label{7}; };
    EnumerationOptions full;
    full.analyticTail = true;
    const auto whole = enumerate_joint(h1, 6, full);
    CHECK(conditional_mi_given(whole, constantLabel).value == doctest::Approx(block_mi(whole).value).epsilon(1e-9));

    // On a truncated table the conditional route renormalizes: the two differ
    // by the entropy term m log m of the entry mass m.
    const auto t = enumerate_joint(h1, 6, 1024, 0.0);
    const MIResult e = block_mi(t);
    const double m = t.entry_mass();
    CHECK(conditional_mi_given(t, constantLabel).value == doctest::Approx(e.value + m * std::log2(m)).epsilon(1e-9));
    const MIResult identity = conditional_mi_given(
        t, PairLabel([](const BlockPair& p) { return Label{p.past.hash() ^ (p.future.hash() * 31)}; }));
    CHECK(std::abs(identity.value) < 1e-9);

    // Decoder label at n = 8: E(n) - H(D) is the conditional term.
    const auto t8 = enumerate_joint(h1, 8, 4096, 0.0);
    const MIResult cond = conditional_mi_given(t8, dn_label(ProcessKind::HPM1));
    const MIResult h = label_entropy(t8, dn_label(ProcessKind::HPM1));
    const MIResult e8 = block_mi(t8);
    CHECK(std::abs(e8.value - h.value - cond.value) <= e8.width() + h.width() + cond.width() + 1e-9);

    // A label that differs between the two routes is rejected.
    SplitLabel broken{[](const Block& b) { return Label{b[0]}; }, [](const Block& b) { return Label{b[0] + 1u}; }};
    CHECK_THROWS_AS(conditional_mi_given(t, broken), LabelDisagreement);
}

TEST_CASE("triple information") {
    const ProcessModel h1(ProcessKind::HPM1, Alpha(1.5));
    const auto t = enumerate_joint(h1, 6, 1024, 0.0);
    CHECK(std::abs(triple_information(t, [](const BlockPair&) { return true; })) < 1e-12);

    // B = past contains a '1'; |I(X;Y;I_B)| <= H(I_B).
    auto hasOne = [](const BlockPair& p) {
        for (unsigned i = 0; i < p.past.size(); ++i)
            if (p.past[i] == 1) return true;
        return false;
    };
    double pb = 0.0;
    for (const auto& e : t.entries) pb += hasOne(e.key) ? e.probability : 0.0;
    pb /= t.entry_mass();
    const double hb = -pb * std::log2(pb) - (1 - pb) * std::log2(1 - pb);
    const double ti = triple_information(t, hasOne);
    CHECK(std::abs(ti) <= hb + 1e-12);

    // Independent past, future and event: past and future are iid fair bits,
    // and the event depends on a separate coin folded into no coordinate.
    std::vector<TableEntry> raw;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            raw.push_back({{Block::from_string(a ? "1" : "0"), Block::from_string(b ? "1" : "0")}, 0.25});
    const auto indep = JointBlockTable::from_entries(1, 2, raw);
    CHECK(std::abs(triple_information(indep, [](const BlockPair& p) { return p.past[0] == 0; })) < 1e-12);
}

TEST_CASE("table persistence") {
    const auto t = enumerate_joint(ProcessModel(ProcessKind::HPM2, Alpha(1.5)), 3, 64, 0.0);
    const auto dir = std::filesystem::temp_directory_path() / "excesslab_table_test";
    std::filesystem::create_directories(dir);
    write_table_binary(t, dir / "t.bin");
    const auto back = read_table_binary(dir / "t.bin");
    REQUIRE(back.entries.size() == t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        CHECK(back.entries[i].key == t.entries[i].key);
        CHECK(back.entries[i].probability == t.entries[i].probability);
    }
    CHECK(back.prunedMass == t.prunedMass);
    CHECK(back.massUncertainty == t.massUncertainty);

    std::ostringstream csv;
    write_table_csv(t, csv);
    const std::string text = csv.str();
    CHECK(text.rfind("past,future,probability\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(t.entries.size() + 1));

    {
        std::ofstream junk(dir / "junk.bin", std::ios::binary);
        junk << "not a table";
    }
    CHECK_THROWS(read_table_binary(dir / "junk.bin"));
    std::filesystem::remove_all(dir);
}
