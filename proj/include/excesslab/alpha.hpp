#pragma once

#include <stdexcept>
#include <string>

namespace excesslab {

/// Tail exponent of the level law P(N=n) = C / (n log^alpha n).
/// Only exponents in (1, 2] give a normalizable law with infinite entropy.
class Alpha {
public:
    explicit Alpha(double value) : value_(value) {
        if (!(value > 1.0 && value <= 2.0))
            throw std::invalid_argument("alpha must lie in (1, 2], got " + std::to_string(value));
    }
    double value() const { return value_; }
    bool is_two() const { return value_ == 2.0; }

    friend bool operator==(const Alpha&, const Alpha&) = default;

private:
    double value_;
};

}  // namespace excesslab
