#pragma once

// Reversible instance normalisation: each input window is standardised with
// its own mean and standard deviation, optionally followed by a learnable
// scalar affine map; forecasts are mapped back with the stored statistics.

#include <utility>

#include "dpad/autodiff.hpp"
#include "dpad/series.hpp"

namespace dpad {

inline constexpr double kRevinEps = 1e-5;

struct RevinState {
    double mean = 0.0;
    double stdev = 0.0;  // population standard deviation
};

/// Learnable 1x1 scale and shift; undefined Vars mean affine is disabled.
struct RevinAffine {
    nn::Var scale;
    nn::Var shift;
    bool enabled() const { return scale.defined(); }
};

RevinState revin_statistics(std::span<const double> x);

/// (x - mean) / (stdev + eps) without affine.
std::pair<Series, RevinState> revin_normalize(const Series& x);
Series revin_denormalize(const Series& y, const RevinState& state);

namespace nn {
/// Statistics are constants of the graph; gradients reach the affine terms.
Var revin_normalize(const Var& x, const RevinState& state, const RevinAffine& affine);
Var revin_denormalize(const Var& y, const RevinState& state, const RevinAffine& affine);
}  // namespace nn

}  // namespace dpad
