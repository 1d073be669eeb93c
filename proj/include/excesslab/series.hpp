#pragma once

// Certified partial and tail sums of the heavy-tailed series
//   sum_m 1 / (m log^alpha m),   log = binary logarithm, m >= 2,
// which drive every normalization constant and closed-form entropy in the
// library.

#include <cstdint>

#include "excesslab/alpha.hpp"
#include "excesslab/interval.hpp"

namespace excesslab {

/// 1 / (m log2^alpha m). Accepts real m so that 2^k for large k can be used.
double level_term(double alpha, double m);

/// An integral-based bracket [lower, upper] for a sum; `delta` is the largest
/// admissible slack between the integral and the sum.
struct LemmaBracket {
    double lower = 0.0;
    double upper = 0.0;
    double delta = 0.0;
    bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Bracket for sum_{m=2}^{n} 1 / (m log^{alpha-1} m): [I, I + 1/2] with the
/// closed-form integral I.
LemmaBracket lemma1_partial(Alpha alpha, double n);

/// Bracket for sum_{m=n}^{inf} 1 / (m log^alpha m): [T, T + 1/(n log^alpha n)].
LemmaBracket lemma1_tail(Alpha alpha, double n);

/// Enclosure of sum_{m >= n} level_term(m), padded for rounding.
Interval tail_enclosure(Alpha alpha, double n);

/// Compensated direct sum of level_term over [first, last], padded for rounding.
Interval direct_sum(Alpha alpha, std::uint64_t first, std::uint64_t last);

/// Sums over the bit-length block {m : 2^{s-1} <= m < 2^s}:
///   mass     = sum f(m)
///   logMass  = sum log2(m) f(m)
///   loglogMass = sum log2(log2 m) f(m)
struct BitBlockSums {
    Interval mass;
    Interval logMass;
    Interval loglogMass;
};

/// Blocks up to this bit length are summed term by term; longer blocks are
/// bracketed by monotone integral bounds.
inline constexpr unsigned kDirectBlockBits = 24;

/// Cached per alpha; s >= 2. Thread-safe.
BitBlockSums bit_block_sums(Alpha alpha, unsigned s);

/// Integral-bracket version, exposed for tests (valid for any s >= 3).
BitBlockSums bit_block_sums_bracketed(Alpha alpha, unsigned s);

}  // namespace excesslab
