#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dpad {

/// |X_k| for k = 0 .. n/2 of the real DFT.
std::vector<double> magnitude_spectrum(std::span<const double> x);

/// Index k in [1, n/2] of the largest DFT magnitude (lowest k on ties).
/// Returns 0 for signals with no energy outside DC or fewer than 2 samples.
std::size_t dominant_bin(std::span<const double> x);

}  // namespace dpad
