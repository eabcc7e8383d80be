#pragma once

// Grey-scale morphology on discrete series. Dilation and erosion are the
// sliding max-plus convolution and its dual; the mean envelope (their
// average) stands in for the interpolated envelopes of classical EMD.
//
// Boundaries use replicate padding of width C: the window for sample t is
// x[clamp(t + w)] for w in [-C, C].

#include <cstddef>
#include <span>
#include <vector>

#include "dpad/series.hpp"

namespace dpad {

/// Symmetric structuring element of odd length 2C+1.
class SEKernel {
public:
    /// The zero SE: pure sliding max/min filter.
    static SEKernel zero(std::size_t half_width);
    /// Throws ValidationError unless `offsets` has odd length, is symmetric and finite.
    static SEKernel symmetric(std::vector<double> offsets);

    std::size_t half_width() const { return half_width_; }
    std::size_t length() const { return offsets_.size(); }
    /// Offset at displacement w in [-C, C].
    double offset(std::ptrdiff_t w) const {
        return offsets_[static_cast<std::size_t>(w + static_cast<std::ptrdiff_t>(half_width_))];
    }
    std::span<const double> offsets() const { return offsets_; }
    bool is_zero() const { return is_zero_; }

private:
    SEKernel(std::size_t half_width, std::vector<double> offsets);

    std::size_t half_width_ = 0;
    std::vector<double> offsets_;
    bool is_zero_ = true;
};

Series dilate(const Series& x, const SEKernel& k);
Series erode(const Series& x, const SEKernel& k);
/// (dilate(x) + erode(x)) / 2.
Series mean_envelope(const Series& x, const SEKernel& k);

// Raw-buffer forms used by the differentiable wrappers. `out` must have
// x.size() elements; if `winners` is non-empty it receives, per output, the
// input index whose value won the window (lowest index on ties). Inputs are
// not validated here.
void dilate_into(std::span<const double> x, const SEKernel& k, std::span<double> out,
                 std::span<std::size_t> winners = {});
void erode_into(std::span<const double> x, const SEKernel& k, std::span<double> out,
                std::span<std::size_t> winners = {});

}  // namespace dpad
