#include "excesslab/decoder.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "excesslab/series.hpp"

namespace excesslab {
namespace {

std::atomic<bool> g_fault{false};

void require_alphabet(const Block& b, unsigned alphabet, const char* who) {
    for (unsigned i = 0; i < b.size(); ++i)
        if (b[i] >= alphabet)
            throw std::invalid_argument(std::string(who) + ": symbol " + std::to_string(b[i]) + " outside the alphabet");
}

// Level whose binary expansion is 1 followed by digits[first, last) of b;
// zero if any of them is not a binary digit or the level would overflow.
DnValue level_from_digits(const Block& b, unsigned first, unsigned last) {
    if (last - first >= 63) return 0;
    DnValue m = 1;
    for (unsigned i = first; i < last; ++i) {
        if (b[i] > 1) return 0;
        m = (m << 1) | b[i];
    }
    return m;
}

// Positions of the delimiter, in increasing order.
std::vector<unsigned> positions_of(const Block& b, Symbol delimiter) {
    std::vector<unsigned> out;
    for (unsigned i = 0; i < b.size(); ++i)
        if (b[i] == delimiter) out.push_back(i);
    return out;
}

DnValue faulty(DnValue v) { return g_fault.load(std::memory_order_relaxed) && v != 0 ? v + 1 : v; }

double eta(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// -p log2 p over an interval of p in [0, 1]: concave with its peak at 1/e.
Interval eta_interval(const Interval& p) {
    const double lo = std::max(0.0, p.lo), hi = std::min(1.0, p.hi);
    if (lo > hi) throw std::domain_error("eta_interval: empty probability range");
    const double a = eta(lo), b = eta(hi);
    double top = std::max(a, b);
    if (lo <= 1.0 / std::numbers::e && 1.0 / std::numbers::e <= hi) top = eta(1.0 / std::numbers::e);
    return widen(Interval(std::min(a, b), top), 1e-15);
}

struct SupportSums {
    Interval mass{0.0};
    Interval weighted{0.0};  // sum f(m) (log m + alpha log log m)
};

SupportSums hpm1_support(Alpha alpha, std::uint64_t last) {
    KahanSum mass, weighted;
    for (std::uint64_t m = 2; m <= last; ++m) {
        const double lg = std::log2(static_cast<double>(m));
        const double f = level_term(alpha.value(), static_cast<double>(m));
        mass += f;
        weighted += f * (lg + alpha.value() * std::log2(lg));
    }
    return {widen(Interval(mass.value()), 1e-13), widen(Interval(weighted.value()), 1e-13)};
}

SupportSums bit_length_support(Alpha alpha, unsigned maxBits) {
    SupportSums out;
    for (unsigned s = 2; s <= maxBits; ++s) {
        const BitBlockSums b = bit_block_sums(alpha, s);
        out.mass += b.mass;
        out.weighted += b.logMass + Interval(alpha.value()) * b.loglogMass;
    }
    return out;
}

}  // namespace

namespace detail {
void set_decoder_fault(bool enabled) { g_fault.store(enabled); }
}  // namespace detail

DnValue decode_past_hpm1(const Block& past) {
    require_alphabet(past, 2, "decode_past_hpm1");
    const auto ones = positions_of(past, 1);
    if (ones.size() < 2) return 0;
    const DnValue p = ones[ones.size() - 1] - ones[ones.size() - 2];
    return p >= 2 && 2 * p <= past.size() ? p : 0;
}

DnValue decode_future_hpm1(const Block& future) {
    require_alphabet(future, 2, "decode_future_hpm1");
    const auto ones = positions_of(future, 1);
    if (ones.size() < 2) return 0;
    const DnValue p = ones[1] - ones[0];
    return faulty(p >= 2 && 2 * p <= future.size() ? p : 0);
}

DnValue decode_past_hpm2(const Block& past) {
    require_alphabet(past, 3, "decode_past_hpm2");
    const auto twos = positions_of(past, 2);
    if (twos.size() < 2) return 0;
    const unsigned a = twos[twos.size() - 2], b = twos[twos.size() - 1];
    if (b - a < 2 || 2 * (b - a) > past.size()) return 0;
    return level_from_digits(past, a + 1, b);
}

DnValue decode_future_hpm2(const Block& future) {
    require_alphabet(future, 3, "decode_future_hpm2");
    const auto twos = positions_of(future, 2);
    if (twos.size() < 2) return 0;
    const unsigned a = twos[0], b = twos[1];
    if (b - a < 2 || 2 * (b - a) > future.size()) return 0;
    return faulty(level_from_digits(future, a + 1, b));
}

DnValue decode_past_hmc(const Block& past) {
    require_alphabet(past, 4, "decode_past_hmc");
    const unsigned n = past.size();
    unsigned run = 0;
    while (run < n && past[n - 1 - run] == 3) ++run;
    if (run == 0 || run == n) return 0;
    // Digits back to the word-start delimiter.
    unsigned i = n - run;
    while (i > 0 && past[i - 1] <= 1) --i;
    if (i == 0 || past[i - 1] != 2) return 0;
    const unsigned digits = n - run - i;
    if (digits == 0) return 0;
    const DnValue m = level_from_digits(past, i, n - run);
    const unsigned s = digits + 1;
    return m != 0 && run <= s && 2 * s <= n ? m : 0;
}

DnValue decode_future_hmc(const Block& future) {
    require_alphabet(future, 4, "decode_future_hmc");
    const unsigned n = future.size();
    unsigned run = 0;
    while (run < n && future[run] == 3) ++run;
    if (run == 0 || run == n) return 0;
    unsigned j = run;
    while (j < n && future[j] <= 1) ++j;
    if (j == n || future[j] != 2) return 0;
    const unsigned digits = j - run;
    if (digits == 0) return 0;
    const DnValue m = level_from_digits(future, run, j);
    const unsigned s = digits + 1;
    return faulty(m != 0 && run <= s && 2 * s <= n ? m : 0);
}

DnValue decode_past(ProcessKind kind, const Block& past) {
    switch (kind) {
        case ProcessKind::HPM1: return decode_past_hpm1(past);
        case ProcessKind::HPM2: return decode_past_hpm2(past);
        case ProcessKind::HMC: return decode_past_hmc(past);
    }
    throw std::logic_error("decode_past: unknown kind");
}

DnValue decode_future(ProcessKind kind, const Block& future) {
    switch (kind) {
        case ProcessKind::HPM1: return decode_future_hpm1(future);
        case ProcessKind::HPM2: return decode_future_hpm2(future);
        case ProcessKind::HMC: return decode_future_hmc(future);
    }
    throw std::logic_error("decode_future: unknown kind");
}

DnValue dn_from_hidden(ProcessKind kind, const StateId& state, unsigned n) {
    const std::uint64_t m = state.level;
    switch (kind) {
        case ProcessKind::HPM1: return 2 * m <= n ? m : 0;
        case ProcessKind::HPM2: return 2 * binary_length(m) <= n ? m : 0;
        case ProcessKind::HMC: {
            const std::uint64_t s = binary_length(m);
            return 2 * s <= n && s + 1 <= state.phase && state.phase <= 2 * s ? m : 0;
        }
    }
    throw std::logic_error("dn_from_hidden: unknown kind");
}

SplitLabel dn_label(ProcessKind kind) {
    return {[kind](const Block& b) { return Label{decode_past(kind, b)}; },
            [kind](const Block& b) { return Label{decode_future(kind, b)}; }};
}

MIResult dn_entropy_closed_form(ProcessKind kind, Alpha alpha, unsigned n) {
    if (n < 2) throw std::invalid_argument("dn_entropy_closed_form: n must be >= 2");
    SupportSums sums;
    if (kind == ProcessKind::HPM1) {
        if (n / 2 >= 2) sums = hpm1_support(alpha, n / 2);
    } else {
        const unsigned maxBits = n / 2;
        if (maxBits >= 2) sums = bit_length_support(alpha, maxBits);
    }
    Interval c = normalization_constant(alpha);
    if (kind == ProcessKind::HMC) c = c / Interval(3.0);
    // sum_m -c f log(c f) = -c log c * sum f + c * sum f (log m + alpha log log m).
    const Interval support = eta_interval(c) * sums.mass + c * sums.weighted;
    const Interval h = support + eta_interval(Interval(1.0) - c * sums.mass);
    return {h.mid(), h.mid() - h.lo, h.hi - h.mid()};
}

IdentityResidual en_dn_identity_check(const JointBlockTable& table, ProcessKind kind) {
    IdentityResidual r;
    const SplitLabel label = dn_label(kind);
    r.blockMi = block_mi(table);
    r.dnEntropy = label_entropy(table, label);
    r.conditionalMi = conditional_mi_given(table, label);
    r.residual = r.blockMi.value - r.dnEntropy.value - r.conditionalMi.value;
    r.certifiedWidth = r.blockMi.width() + r.dnEntropy.width() + r.conditionalMi.width();
    return r;
}

}  // namespace excesslab
