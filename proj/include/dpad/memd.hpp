#pragma once

// Morphological empirical mode decomposition. Each IMF is extracted by
// repeatedly subtracting the morphological mean envelope (sifting) until two
// successive candidates satisfy the Cauchy-type relative tolerance; the IMF
// is then removed from the running residual and the process repeats.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dpad/autodiff.hpp"
#include "dpad/morph.hpp"
#include "dpad/series.hpp"
#include "dpad/tensor.hpp"

namespace dpad {

struct SiftConfig {
    SEKernel kernel = SEKernel::zero(1);
    double rt_threshold = 0.2;
    int max_sift = 10;
};

/// T x K stack of components: IMFs in descending frequency order, unused IMF
/// slots zero-filled, residual always in the last column.
class ComponentMatrix {
public:
    ComponentMatrix() = default;
    explicit ComponentMatrix(Matrix data) : data_(std::move(data)) {}

    std::size_t length() const { return data_.rows(); }
    std::size_t count() const { return data_.cols(); }
    double operator()(std::size_t t, std::size_t i) const { return data_(t, i); }
    std::vector<double> column(std::size_t i) const { return data_.col(i); }
    /// Elementwise sum over components.
    std::vector<double> reconstruct() const;
    const Matrix& matrix() const { return data_; }

private:
    Matrix data_;
};

/// Working state of one IMF extraction.
struct SiftState {
    std::vector<double> current;
    std::optional<std::vector<double>> previous_candidate;
    int sift_count = 0;
    int imfs_found = 0;
};

/// ||prev - cur||^2 / ||prev||^2. Throws DegenerateSignal if ||prev|| == 0 and
/// ValidationError on a length mismatch.
double relative_tolerance(std::span<const double> prev, std::span<const double> cur);

/// Number of samples strictly above or strictly below both neighbours.
std::size_t count_strict_extrema(std::span<const double> x);

/// One sifting step: s - mean_envelope(s).
Series sift_once(const Series& s, const SEKernel& k);

struct ImfSplit {
    Series imf;
    Series residual;
    int sifts = 0;
};

/// Sifts `s` until the relative tolerance between successive candidates is
/// at most cfg.rt_threshold (the first candidate is compared with `s`
/// itself) or cfg.max_sift sifts have run. Returns nullopt when `s` holds no
/// further IMF: fewer than two strict extrema, or a candidate whose norm falls
/// below 1e-12 of `s`.
std::optional<ImfSplit> extract_imf(const Series& s, const SiftConfig& cfg);

/// Decomposes `x` into exactly `count` components (count - 1 IMF slots plus
/// the residual). Throws ValidationError if x is shorter than the kernel or
/// count < 2.
ComponentMatrix mcd_decompose(const Series& x, std::size_t count, const SiftConfig& cfg);

namespace nn {

struct ImfSplitVar {
    Var imf;
    Var residual;
    int sifts = 0;
};

/// Differentiable extraction on an n x 1 column. Gradients follow the sifting
/// path taken in the forward pass; the stop decisions are treated as
/// constants. `reference_norm` scales the vanishing-candidate test.
std::optional<ImfSplitVar> extract_imf(const Var& s, const SiftConfig& cfg, double reference_norm);

/// Differentiable decomposition of an n x 1 column into an n x count matrix.
Var mcd_decompose(const Var& x, std::size_t count, const SiftConfig& cfg);

}  // namespace nn
}  // namespace dpad
