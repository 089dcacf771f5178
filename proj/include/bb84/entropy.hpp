#pragma once

#include <span>

namespace bb84 {

/// Binary entropy H2(p) in bits, with 0*log2(0) = 0. Throws std::domain_error
/// for p outside [0,1].
double binary_entropy(double p);

/// Shannon entropy of a probability vector in bits. Entries must be
/// nonnegative and sum to 1 within 1e-9.
double shannon_entropy(std::span<const double> dist);

/// Signed binary entropy p*log2(p) + (1-p)*log2(1-p), i.e. -H2(p).
double signed_entropy(double p);

}  // namespace bb84
