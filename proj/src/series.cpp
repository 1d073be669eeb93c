#include "excesslab/series.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace excesslab {
namespace {

constexpr double kLn2 = std::numbers::ln2;
// Relative padding covering term-evaluation and compensated-summation error.
constexpr double kRoundPad = 1e-13;

double integral_mass(double alpha, double u0, double u1) {
    return kLn2 / (alpha - 1.0) * (std::pow(u0, 1.0 - alpha) - std::pow(u1, 1.0 - alpha));
}

double integral_log(double alpha, double u0, double u1) {
    if (alpha == 2.0) return kLn2 * std::log(u1 / u0);
    return kLn2 * (std::pow(u1, 2.0 - alpha) - std::pow(u0, 2.0 - alpha)) / (2.0 - alpha);
}

double integral_loglog(double alpha, double u0, double u1) {
    const double b = 1.0 - alpha;
    auto prim = [b](double u) { return std::pow(u, b) * (std::log(u) / b - 1.0 / (b * b)); };
    return prim(u1) - prim(u0);
}

Interval padded(double lo, double hi) { return widen(Interval(lo, hi), kRoundPad); }

std::vector<BitBlockSums> compute_direct_blocks(double alpha) {
    std::vector<BitBlockSums> out(kDirectBlockBits + 1);
    for (unsigned s = 2; s <= kDirectBlockBits; ++s) {
        KahanSum mass, logm, loglog;
        const std::uint64_t first = std::uint64_t{1} << (s - 1);
        const std::uint64_t last = (std::uint64_t{1} << s) - 1;
        for (std::uint64_t m = first; m <= last; ++m) {
            const double lg = std::log2(static_cast<double>(m));
            const double f = 1.0 / (static_cast<double>(m) * std::pow(lg, alpha));
            mass += f;
            logm += lg * f;
            loglog += std::log2(lg) * f;
        }
        out[s] = {padded(mass.value(), mass.value()), padded(logm.value(), logm.value()),
                  padded(loglog.value(), loglog.value())};
    }
    return out;
}

}  // namespace

double level_term(double alpha, double m) {
    return 1.0 / (m * std::pow(std::log2(m), alpha));
}

LemmaBracket lemma1_partial(Alpha alpha, double n) {
    if (n < 2) throw std::invalid_argument("lemma1_partial: n must be >= 2");
    const double a = alpha.value();
    const double lg = std::log2(n);
    const double integral = alpha.is_two()
                                ? kLn2 * kLn2 * std::log2(lg)
                                : kLn2 / (2.0 - a) * (std::pow(lg, 2.0 - a) - 1.0);
    return {integral, integral + 0.5, 0.5};
}

LemmaBracket lemma1_tail(Alpha alpha, double n) {
    if (n < 2) throw std::invalid_argument("lemma1_tail: n must be >= 2");
    const double a = alpha.value();
    const double t = kLn2 / (a - 1.0) * std::pow(std::log2(n), 1.0 - a);
    const double first = level_term(a, n);
    return {t, t + first, first};
}

Interval tail_enclosure(Alpha alpha, double n) {
    const LemmaBracket b = lemma1_tail(alpha, n);
    return padded(b.lower, b.upper);
}

Interval direct_sum(Alpha alpha, std::uint64_t first, std::uint64_t last) {
    if (first < 2) throw std::invalid_argument("direct_sum: first index must be >= 2");
    KahanSum acc;
    for (std::uint64_t m = first; m <= last; ++m) acc += level_term(alpha.value(), static_cast<double>(m));
    const double v = acc.value();
    return padded(v, v);
}

BitBlockSums bit_block_sums_bracketed(Alpha alpha, unsigned s) {
    if (s < 3) throw std::invalid_argument("bit_block_sums_bracketed: s must be >= 3");
    const double a = alpha.value();
    const double u0 = s - 1.0;
    const double u1 = s;
    const double fa = level_term(a, std::ldexp(1.0, static_cast<int>(s) - 1));
    const double i1 = integral_mass(a, u0, u1);
    const double i2 = integral_log(a, u0, u1);
    const double i3 = integral_loglog(a, u0, u1);
    // Each weighted term is decreasing in m on blocks with s >= 3.
    return {padded(i1, i1 + fa), padded(i2, i2 + u0 * fa), padded(i3, i3 + std::log2(u0) * fa)};
}

BitBlockSums bit_block_sums(Alpha alpha, unsigned s) {
    if (s < 2) throw std::invalid_argument("bit_block_sums: s must be >= 2");
    if (s > kDirectBlockBits) return bit_block_sums_bracketed(alpha, s);

    static std::mutex mutex;
    static std::map<double, std::vector<BitBlockSums>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(alpha.value());
    if (it == cache.end()) it = cache.emplace(alpha.value(), compute_direct_blocks(alpha.value())).first;
    return it->second[s];
}

}  // namespace excesslab
