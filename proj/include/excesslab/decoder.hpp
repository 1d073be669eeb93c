#pragma once

// Level-revealing variables D_n: each is computable from the past block alone
// and, equally, from the future block alone. They yield the decomposition
//   E(n) = H(D_n) + I(past; future | D_n).

#include <cstdint>

#include "excesslab/block.hpp"
#include "excesslab/exact.hpp"
#include "excesslab/model.hpp"

namespace excesslab {

/// 0 = undetermined (tail case); otherwise a level m >= 2.
using DnValue = std::uint64_t;

DnValue decode_past_hpm1(const Block& past);
DnValue decode_future_hpm1(const Block& future);
DnValue decode_past_hpm2(const Block& past);
DnValue decode_future_hpm2(const Block& future);
DnValue decode_past_hmc(const Block& past);
DnValue decode_future_hmc(const Block& future);

DnValue decode_past(ProcessKind kind, const Block& past);
DnValue decode_future(ProcessKind kind, const Block& future);

/// D_n from the hidden state at time 0 (its defining condition).
DnValue dn_from_hidden(ProcessKind kind, const StateId& stateAtZero, unsigned n);

/// The pair of decoders as a split label for the exact engine.
SplitLabel dn_label(ProcessKind kind);

/// H(D_n) from the closed-form law of D_n, with the constant's enclosure propagated.
MIResult dn_entropy_closed_form(ProcessKind kind, Alpha alpha, unsigned n);

/// E(n) - H(D_n) - I(past; future | D_n) on a table; zero up to rounding.
struct IdentityResidual {
    double residual = 0.0;
    double certifiedWidth = 0.0;  ///< sum of the three certified widths
    MIResult blockMi;
    MIResult dnEntropy;
    MIResult conditionalMi;
};

/// Throws LabelDisagreement if the decoders disagree on any entry.
IdentityResidual en_dn_identity_check(const JointBlockTable& table, ProcessKind kind);

namespace detail {
/// Test hook: when enabled, the future-side decoders return a wrong level.
void set_decoder_fault(bool enabled);
}  // namespace detail

}  // namespace excesslab
