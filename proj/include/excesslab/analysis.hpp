#pragma once

// Upper-bound curves, growth-rate fits and report rows.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "excesslab/alpha.hpp"
#include "excesslab/exact.hpp"
#include "excesslab/interval.hpp"
#include "excesslab/model.hpp"
#include "excesslab/series.hpp"

namespace excesslab {

/// Enclosure of P(B) H(Y_0 | B) + n P(B^c) log|X| + 1 for B = (N_0 <= threshold),
/// an upper bound on E(n) for every threshold. Thresholds above 2^24 are
/// rounded down to the nearest 2^k - 1.
Interval state_entropy_bound(ProcessKind kind, Alpha alpha, unsigned n, std::uint64_t threshold);

/// The bound above at threshold 2^n (n <= 62) or its rounded form beyond.
Interval theorem1_bound(ProcessKind kind, Alpha alpha, unsigned n);

/// P(N <= threshold) and H(Y_0 | N <= threshold) in bits.
struct TruncatedState {
    Interval mass;
    Interval entropy;
};
TruncatedState truncated_state_entropy(ProcessKind kind, Alpha alpha, std::uint64_t threshold);

enum class Regressor {
    LogPow,    ///< value = a log^beta n + b
    Pow,       ///< value = a n^beta + b
    Log,       ///< value = a log n + b
    LogLog,    ///< value = a log log n + b
    PowerLaw,  ///< log value = a log n + b
};

enum class RateClass { Poly, Log, LogPow, LogLog };

std::string to_string(Regressor r);
std::string to_string(RateClass c);

struct RatePoint {
    double n = 0.0;
    double value = 0.0;
};

struct RateFitReport {
    std::string kind;
    double alpha = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double rSquared = 0.0;
    RateClass predictedClass = RateClass::Poly;
    double predictedExponent = 0.0;  ///< 2 - alpha for Poly and LogPow, else 0
    std::string regressor;
    double fitFrom = 0.0, fitTo = 0.0;
    std::size_t points = 0;
};

/// Theta-class of E(n) for a process kind and alpha.
RateClass predicted_class(ProcessKind kind, Alpha alpha);

/// Ordinary least squares of value on g(n). Requires >= 4 points with
/// strictly increasing n and finite regressor values.
RateFitReport fit_rate(std::span<const RatePoint> points, Regressor regressor, double beta = 0.5);

/// Fills kind/alpha/predicted class on a report.
RateFitReport& annotate(RateFitReport& report, ProcessKind kind, Alpha alpha);

struct ReportRow {
    std::string kind;
    double alpha = 0.0;
    unsigned n = 0;
    double value = 0.0;
    double errLow = 0.0;
    double errHigh = 0.0;
    std::string source;  ///< exact, closed_form, sampled or bound
};

/// A named event on observable (past, future) blocks.
struct NamedPredicate {
    std::string name;
    PairEvent event;
};

/// A fixed family of 20 observable predicates used for the triple-information check.
std::vector<NamedPredicate> observable_predicates(unsigned alphabetSize);

void write_rows_csv(std::span<const ReportRow> rows, std::ostream& out);

std::string format_double(double x);

}  // namespace excesslab
