#include "dpad/bgg.hpp"

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad {

BggParams make_bgg(nn::ParameterSet& params, const std::string& prefix, const BggShape& shape,
                   nn::Initializer& init) {
    if (shape.mask_span % 2 == 0) throw ConfigError("BGG mask span must be odd");
    BggParams p;
    p.projection =
        nn::make_mlp(params, prefix + ".proj", {shape.window, shape.hidden, shape.hidden}, init);
    p.transform = params.add(prefix + ".transform", init.uniform(shape.hidden, 2, shape.hidden));
    const std::size_t fan_in = shape.mask_span * shape.components;
    p.mask_kernels = params.add(prefix + ".mask_kernels",
                                init.uniform(shape.components, fan_in, fan_in));
    p.mask_bias = params.add(prefix + ".mask_bias", init.uniform(shape.components, 1, fan_in));
    return p;
}

nn::Var intra_projection(const nn::Var& components, const BggParams& p) {
    if (components.rows() != p.projection.in_width()) {
        throw ValidationError("intra_projection: component length does not match projection input");
    }
    // hidden is d x K; the shared network maps every column independently.
    const nn::Var hidden = nn::mlp(components, p.projection);
    return nn::softmax_rows(nn::matmul(nn::transpose(hidden), p.transform));
}

nn::Var inter_mask(const nn::Var& components, const BggParams& p) {
    if (p.mask_kernels.rows() != components.cols()) {
        throw ValidationError("inter_mask: kernel count does not match component count");
    }
    const nn::Var mask = nn::conv2d_components(components, p.mask_kernels, p.mask_bias);
    return nn::mul(components, mask);
}

}  // namespace dpad
