#include "excesslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "excesslab/rng.hpp"

namespace excesslab {
namespace {

constexpr std::uint64_t kDirectThreshold = std::uint64_t{1} << kDirectBlockBits;

// Sums over a level range of f(m), f(m)(log m + alpha log log m) and f(m) log r(m).
struct LevelSums {
    Interval mass{0.0};
    Interval weighted{0.0};
    Interval phaseLog{0.0};
};

double log2_phases(ProcessKind kind, std::uint64_t m) {
    switch (kind) {
        case ProcessKind::HPM1: return std::log2(static_cast<double>(m));
        case ProcessKind::HPM2: return std::log2(static_cast<double>(binary_length(m)));
        case ProcessKind::HMC: return std::log2(3.0 * static_cast<double>(binary_length(m)));
    }
    return 0.0;
}

LevelSums direct_levels(ProcessKind kind, Alpha alpha, std::uint64_t first, std::uint64_t last) {
    KahanSum mass, weighted, phaseLog;
    for (std::uint64_t m = first; m <= last; ++m) {
        const double lg = std::log2(static_cast<double>(m));
        const double f = level_term(alpha.value(), static_cast<double>(m));
        mass += f;
        weighted += f * (lg + alpha.value() * std::log2(lg));
        phaseLog += f * log2_phases(kind, m);
    }
    auto pad = [](const KahanSum& k) { return widen(Interval(k.value()), 1e-13); };
    return {pad(mass), pad(weighted), pad(phaseLog)};
}

LevelSums block_levels(ProcessKind kind, Alpha alpha, unsigned s) {
    const BitBlockSums b = bit_block_sums(alpha, s);
    LevelSums out{b.mass, b.logMass + Interval(alpha.value()) * b.loglogMass, Interval(0.0)};
    if (kind == ProcessKind::HPM1)
        out.phaseLog = b.logMass;
    else
        out.phaseLog = b.mass * Interval(log2_phases(kind, std::uint64_t{1} << (s - 1)));
    return out;
}

LevelSums& operator+=(LevelSums& a, const LevelSums& b) {
    a.mass += b.mass;
    a.weighted += b.weighted;
    a.phaseLog += b.phaseLog;
    return a;
}

// Levels with at most `bits` binary digits, plus the single level 2^bits if asked.
LevelSums levels_by_bits(ProcessKind kind, Alpha alpha, unsigned bits, bool withPowerOfTwo) {
    LevelSums out;
    for (unsigned s = 2; s <= bits; ++s) out += block_levels(kind, alpha, s);
    if (withPowerOfTwo && bits >= 1) {
        const double m = std::ldexp(1.0, static_cast<int>(bits));
        const double f = level_term(alpha.value(), m);
        const double lg = bits;
        const double sBits = bits + 1.0;
        const double phases = kind == ProcessKind::HPM1   ? lg
                              : kind == ProcessKind::HPM2 ? std::log2(sBits)
                                                          : std::log2(3.0 * sBits);
        auto pad = [](double v) { return widen(Interval(v), 1e-15); };
        out += LevelSums{pad(f), pad(f * (lg + alpha.value() * std::log2(lg))), pad(f * phases)};
    }
    return out;
}

// Thresholds above 2^24 that are not of the form 2^k - 1 are rounded down to one.
std::uint64_t effective_threshold(std::uint64_t threshold) {
    if (threshold <= kDirectThreshold) return threshold;
    if (threshold >= (std::uint64_t{1} << 63)) return (std::uint64_t{1} << 63) - 1;
    return (std::uint64_t{1} << (binary_length(threshold + 1) - 1)) - 1;
}

LevelSums levels_up_to(ProcessKind kind, Alpha alpha, std::uint64_t threshold) {
    if (threshold < 2) return {};
    threshold = effective_threshold(threshold);
    const unsigned full = static_cast<unsigned>(binary_length(threshold + 1) - 1);  // 2^full - 1 <= threshold
    LevelSums out = levels_by_bits(kind, alpha, full, false);
    const std::uint64_t next = std::uint64_t{1} << full;
    if (next <= threshold) out += direct_levels(kind, alpha, std::max<std::uint64_t>(next, 2), threshold);
    return out;
}

Interval log2_interval(const Interval& x) {
    if (!(x.lo > 0.0)) throw std::domain_error("log2 of a nonpositive interval");
    return widen(Interval(std::log2(x.lo), std::log2(x.hi)), 1e-15);
}

unsigned alphabet_of(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::HPM1: return 2;
        case ProcessKind::HPM2: return 3;
        case ProcessKind::HMC: return 4;
    }
    return 4;
}

double regressor_value(Regressor r, double n, double beta) {
    switch (r) {
        case Regressor::LogPow: return std::pow(std::log2(n), beta);
        case Regressor::Pow: return std::pow(n, beta);
        case Regressor::Log: return std::log2(n);
        case Regressor::LogLog: return std::log2(std::log2(n));
        case Regressor::PowerLaw: return std::log(n);
    }
    return 0.0;
}

TruncatedState state_from_sums(Alpha alpha, const LevelSums& sums) {
    const Interval c = normalization_constant(alpha);
    const Interval mass = c * sums.mass;
    if (!(mass.lo > 0.0)) return {Interval(0.0), Interval(0.0)};
    // P(B) H(Y_0|B) = sum_m C f(m) log(r(m) / (C f(m))) + P(B) log P(B).
    const Interval weighted = -(c * log2_interval(c)) * sums.mass + c * (sums.weighted + sums.phaseLog);
    return {mass, weighted / mass + log2_interval(mass)};
}

Interval bound_from_parts(ProcessKind kind, Alpha alpha, unsigned n, const TruncatedState& inside,
                          const Interval& outsideSum) {
    const Interval c = normalization_constant(alpha);
    const double logAlphabet = std::log2(static_cast<double>(alphabet_of(kind)));
    return inside.mass * inside.entropy + Interval(n * logAlphabet) * (c * outsideSum) + Interval(1.0);
}

}  // namespace

TruncatedState truncated_state_entropy(ProcessKind kind, Alpha alpha, std::uint64_t threshold) {
    return state_from_sums(alpha, levels_up_to(kind, alpha, threshold));
}

Interval state_entropy_bound(ProcessKind kind, Alpha alpha, unsigned n, std::uint64_t threshold) {
    if (n < 1) throw std::invalid_argument("state_entropy_bound: n must be >= 1");
    threshold = effective_threshold(std::max<std::uint64_t>(threshold, 1));
    const TruncatedState inside = truncated_state_entropy(kind, alpha, threshold);
    return bound_from_parts(kind, alpha, n, inside, tail_enclosure(alpha, static_cast<double>(threshold) + 1.0));
}

Interval theorem1_bound(ProcessKind kind, Alpha alpha, unsigned n) {
    if (n < 1) throw std::invalid_argument("theorem1_bound: n must be >= 1");
    if (n <= kDirectBlockBits) return state_entropy_bound(kind, alpha, n, std::uint64_t{1} << n);
    // B = (N <= 2^n): full bit-length blocks plus the level 2^n itself.
    const TruncatedState inside = state_from_sums(alpha, levels_by_bits(kind, alpha, n, true));
    const double top = std::ldexp(1.0, static_cast<int>(n));
    const LemmaBracket from = lemma1_tail(alpha, top);
    const double first = level_term(alpha.value(), top);
    const Interval outside = widen(Interval(from.lower - first, from.upper - first), 1e-13);
    return bound_from_parts(kind, alpha, n, inside, outside);
}

std::string to_string(Regressor r) {
    switch (r) {
        case Regressor::LogPow: return "logPow";
        case Regressor::Pow: return "pow";
        case Regressor::Log: return "log";
        case Regressor::LogLog: return "loglog";
        case Regressor::PowerLaw: return "powerLaw";
    }
    return "?";
}

std::string to_string(RateClass c) {
    switch (c) {
        case RateClass::Poly: return "poly";
        case RateClass::Log: return "log";
        case RateClass::LogPow: return "logPow";
        case RateClass::LogLog: return "loglog";
    }
    return "?";
}

RateClass predicted_class(ProcessKind kind, Alpha alpha) {
    if (kind == ProcessKind::HPM1) return alpha.is_two() ? RateClass::LogLog : RateClass::LogPow;
    return alpha.is_two() ? RateClass::Log : RateClass::Poly;
}

RateFitReport fit_rate(std::span<const RatePoint> points, Regressor regressor, double beta) {
    if (points.size() < 4) throw std::invalid_argument("fit_rate: at least 4 points are required");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i].n > points[i - 1].n))
            throw std::invalid_argument("fit_rate: n must be strictly increasing");
        const double g = regressor_value(regressor, points[i].n, beta);
        if (!std::isfinite(g) || (regressor == Regressor::LogLog && !(points[i].n > 2.0)))
            throw std::invalid_argument("fit_rate: regressor undefined at n = " + format_double(points[i].n));
        double v = points[i].value;
        if (regressor == Regressor::PowerLaw) {
            if (!(v > 0.0)) throw std::invalid_argument("fit_rate: power-law fit needs positive values");
            v = std::log(v);
        }
        x.push_back(g);
        y.push_back(v);
    }
    const double k = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: degenerate regressor values");
    RateFitReport r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.rSquared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    r.regressor = to_string(regressor);
    if (regressor == Regressor::LogPow || regressor == Regressor::Pow) r.regressor += "(" + format_double(beta) + ")";
    r.fitFrom = points.front().n;
    r.fitTo = points.back().n;
    r.points = points.size();
    return r;
}

RateFitReport& annotate(RateFitReport& report, ProcessKind kind, Alpha alpha) {
    report.kind = to_string(kind);
    report.alpha = alpha.value();
    report.predictedClass = predicted_class(kind, alpha);
    report.predictedExponent =
        report.predictedClass == RateClass::Poly || report.predictedClass == RateClass::LogPow ? 2.0 - alpha.value()
                                                                                              : 0.0;
    return report;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<NamedPredicate> observable_predicates(unsigned alphabetSize) {
    const Symbol top = static_cast<Symbol>(alphabetSize - 1);
    auto contains = [](const Block& b, Symbol x) {
        for (unsigned i = 0; i < b.size(); ++i)
            if (b[i] == x) return true;
        return false;
    };
    auto zeros = [](const Block& b) {
        unsigned c = 0;
        for (unsigned i = 0; i < b.size(); ++i) c += b[i] == 0;
        return c;
    };
    auto constant = [](const Block& b) {
        for (unsigned i = 1; i < b.size(); ++i)
            if (b[i] != b[0]) return false;
        return true;
    };
    auto hashed = [](const BlockPair& p) { return mix64(BlockHash{}(p)); };
    std::vector<NamedPredicate> out;
    for (Symbol a : {Symbol{0}, Symbol{1}}) {
        out.push_back({"past starts with " + std::to_string(a), [a](const BlockPair& p) { return p.past[0] == a; }});
        out.push_back({"future ends with " + std::to_string(a),
                       [a](const BlockPair& p) { return p.future[p.future.size() - 1] == a; }});
    }
    out.push_back({"past contains top symbol", [=](const BlockPair& p) { return contains(p.past, top); }});
    out.push_back({"future contains top symbol", [=](const BlockPair& p) { return contains(p.future, top); }});
    out.push_back({"both contain top symbol",
                   [=](const BlockPair& p) { return contains(p.past, top) && contains(p.future, top); }});
    out.push_back({"neither contains top symbol",
                   [=](const BlockPair& p) { return !contains(p.past, top) && !contains(p.future, top); }});
    out.push_back({"past equals future", [](const BlockPair& p) { return p.past == p.future; }});
    out.push_back({"past equals reversed future", [](const BlockPair& p) { return p.past == p.future.reversed(); }});
    out.push_back({"symbols across the cut agree",
                   [](const BlockPair& p) { return p.past[p.past.size() - 1] == p.future[0]; }});
    out.push_back({"outer symbols agree",
                   [](const BlockPair& p) { return p.past[0] == p.future[p.future.size() - 1]; }});
    out.push_back({"past at least half zeros", [=](const BlockPair& p) { return 2 * zeros(p.past) >= p.past.size(); }});
    out.push_back(
        {"future at least half zeros", [=](const BlockPair& p) { return 2 * zeros(p.future) >= p.future.size(); }});
    out.push_back({"more zeros in past", [=](const BlockPair& p) { return zeros(p.past) > zeros(p.future); }});
    out.push_back({"past constant", [=](const BlockPair& p) { return constant(p.past); }});
    out.push_back({"future constant", [=](const BlockPair& p) { return constant(p.future); }});
    out.push_back({"even symbol sum", [](const BlockPair& p) {
                       unsigned sum = 0;
                       for (unsigned i = 0; i < p.past.size(); ++i) sum += p.past[i] + p.future[i];
                       return sum % 2 == 0;
                   }});
    out.push_back({"hash bit", [=](const BlockPair& p) { return (hashed(p) & 1u) != 0; }});
    out.push_back({"hash quarter", [=](const BlockPair& p) { return (hashed(p) & 3u) == 0; }});
    return out;
}

void write_rows_csv(std::span<const ReportRow> rows, std::ostream& out) {
    out << "kind,alpha,n,value,err_low,err_high,source\n";
    for (const auto& r : rows)
        out << r.kind << ',' << format_double(r.alpha) << ',' << r.n << ',' << format_double(r.value) << ','
            << format_double(r.errLow) << ',' << format_double(r.errHigh) << ',' << r.source << '\n';
}

}  // namespace excesslab
