#include "dpad/drd.hpp"

#include <string>

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad {
namespace {

nn::Var decompose(const nn::Var& x, const DrdShape& shape) {
    const nn::Var input = shape.stop_gradient ? x.detach() : x;
    return nn::mcd_decompose(input, shape.components, shape.sift);
}

}  // namespace

std::pair<nn::Var, nn::Var> dr_reconstruct(const nn::Var& query, const nn::Var& key,
                                           const std::array<nn::MlpParams, 2>& branches) {
    if (key.cols() != 2 || key.rows() != query.cols()) {
        throw ValidationError("dr_reconstruct: key must be K x 2 for a T x K query");
    }
    const nn::Var mixed = nn::matmul(query, key);
    return {nn::mlp(nn::column(mixed, 0), branches[0]), nn::mlp(nn::column(mixed, 1), branches[1])};
}

std::pair<nn::Var, nn::Var> dr_block_forward(const nn::Var& x, const DrBlock& block,
                                             const DrdShape& shape) {
    if (x.rows() != shape.window || x.cols() != 1) {
        throw ValidationError("dr_block_forward: expected a " + std::to_string(shape.window) +
                              " x 1 input");
    }
    const nn::Var components = decompose(x, shape);
    const nn::Var key = intra_projection(components, block.guidance);
    const nn::Var query = inter_mask(components, block.guidance);
    return dr_reconstruct(query, key, block.branches);
}

DrdTree::DrdTree(nn::ParameterSet& params, const DrdShape& shape, nn::Initializer& init)
    : shape_(shape) {
    if (shape.levels < 1 || shape.levels > 6) throw ConfigError("D-R-D levels must be in [1, 6]");
    if (shape.components < 2) throw ConfigError("D-R-D needs at least 2 components");
    if (shape.window < shape.sift.kernel.length()) {
        throw ConfigError("window is shorter than the SE kernel");
    }
    const BggShape bgg{shape.window, shape.components, shape.hidden, shape.mask_span};
    for (std::size_t level = 1; level < shape.levels; ++level) {
        std::vector<DrBlock> row;
        const std::size_t count = std::size_t{1} << (level - 1);
        for (std::size_t pos = 1; pos <= count; ++pos) {
            const std::string prefix =
                "drd.l" + std::to_string(level) + ".b" + std::to_string(pos);
            DrBlock block;
            block.level = level;
            block.position = pos;
            block.guidance = make_bgg(params, prefix + ".bgg", bgg, init);
            for (std::size_t b = 0; b < 2; ++b) {
                block.branches[b] =
                    nn::make_mlp(params, prefix + ".branch" + std::to_string(b),
                                 {shape.window, shape.window, shape.window}, init);
            }
            row.push_back(std::move(block));
        }
        blocks_.push_back(std::move(row));
    }
}

std::size_t DrdTree::output_components() const {
    return (std::size_t{1} << (shape_.levels - 1)) * shape_.components;
}

nn::Var DrdTree::forward(const nn::Var& x) const {
    std::vector<nn::Var> series{x};
    for (const auto& level : blocks_) {
        std::vector<nn::Var> next;
        next.reserve(2 * series.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            auto [first, second] = dr_block_forward(series[i], level[i], shape_);
            next.push_back(std::move(first));
            next.push_back(std::move(second));
        }
        series = std::move(next);
    }
    std::vector<nn::Var> leaves;
    leaves.reserve(series.size());
    for (const auto& s : series) leaves.push_back(decompose(s, shape_));
    return nn::hcat(leaves);
}

}  // namespace dpad
