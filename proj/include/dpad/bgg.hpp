#pragma once

// Branch guidance generator. For a T x K component stack it produces
//   key   (K x 2): per-component soft weights over the two output branches,
//                  from a projection network shared by all components;
//   query (T x K): the components gated elementwise by a time-varying mask
//                  obtained from a 2-D convolution across time and components.

#include <string>

#include "dpad/autodiff.hpp"
#include "dpad/params.hpp"

namespace dpad {

struct BggParams {
    nn::MlpParams projection;  // T -> d -> d
    nn::Var transform;         // d x 2
    nn::Var mask_kernels;      // K x (O * K), see nn::conv2d_components
    nn::Var mask_bias;         // K x 1
};

struct BggShape {
    std::size_t window = 0;      // T
    std::size_t components = 0;  // K
    std::size_t hidden = 0;      // d
    std::size_t mask_span = 3;   // O, odd
};

BggParams make_bgg(nn::ParameterSet& params, const std::string& prefix, const BggShape& shape,
                   nn::Initializer& init);

/// softmax over the two branches of (MLP(component_i)^T * transform), one row
/// per component.
nn::Var intra_projection(const nn::Var& components, const BggParams& p);

/// components * conv2d(components) (Hadamard).
nn::Var inter_mask(const nn::Var& components, const BggParams& p);

}  // namespace dpad
