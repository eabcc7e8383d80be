#pragma once

// Differentiable operations on Var. Shapes are validated on every call and
// mismatches raise ValidationError. Matrices follow a column convention:
// a feature map over N items is features x N, so an affine layer is W*x + b.

#include <vector>

#include "dpad/autodiff.hpp"
#include "dpad/morph.hpp"

namespace dpad::nn {

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
/// Elementwise (Hadamard) product.
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
/// a * x + b with constant scalars.
Var affine_const(const Var& x, double a, double b);

Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);
/// x (m x n) + b (m x 1) broadcast over columns.
Var add_col_bias(const Var& x, const Var& b);
/// W (out x in) * x (in x n) + b (out x 1).
Var linear(const Var& w, const Var& x, const Var& b);

Var relu(const Var& x);
Var abs(const Var& x);
/// Row-wise softmax, stabilised by subtracting the row maximum.
Var softmax_rows(const Var& x);
/// Column-wise softmax (each column sums to one).
Var softmax_cols(const Var& x);

Var sum_all(const Var& x);
Var mean_all(const Var& x);
/// Sums over columns: (m x n) -> (m x 1).
Var sum_cols(const Var& x);

/// Column j as an m x 1 vector.
Var column(const Var& x, std::size_t j);
/// Horizontal concatenation; all inputs share the row count.
Var hcat(const std::vector<Var>& parts);
/// Vertical concatenation; all inputs share the column count.
Var vcat(const std::vector<Var>& parts);

/// x * scale + shift with 1x1 learnable scale and shift.
Var scalar_affine(const Var& x, const Var& scale, const Var& shift);
/// (y - shift) / (scale + eps): inverse of scalar_affine.
Var inverse_scalar_affine(const Var& y, const Var& scale, const Var& shift, double eps);

/// Sliding max/min filters on an n x 1 column. The backward pass routes each
/// output gradient to the input index that won its window (lowest index on
/// ties), like max-pooling. The structuring element is a constant.
Var dilate(const Var& x, const SEKernel& k);
Var erode(const Var& x, const SEKernel& k);
/// (dilate(x) + erode(x)) / 2.
Var mean_envelope(const Var& x, const SEKernel& k);

/// 2-D convolution over a T x C component stack. Each row j of `kernels`
/// holds an O x C kernel flattened as [u * C + v] spanning O time steps and
/// all C components; output channel j is
///   out[t][j] = sum_{u,v} x[clamp(t + u - (O-1)/2)][v] * k[j][u][v] + bias[j].
/// Time is replicate-padded so the output keeps T rows. O must be odd.
Var conv2d_components(const Var& x, const Var& kernels, const Var& bias);

}  // namespace dpad::nn
