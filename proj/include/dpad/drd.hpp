#pragma once

// Decomposition-reconstruction-decomposition tree. A D-R block decomposes its
// input into K components, weighs them with branch guidance and rebuilds two
// new series. Levels 1 .. L-1 hold 2^(l-1) blocks each; the 2^(L-1) series
// leaving the last block level are decomposed once more, so the tree emits
// T x (2^(L-1) * K) components. L = 1 degenerates to a single decomposition.

#include <array>
#include <utility>
#include <vector>

#include "dpad/bgg.hpp"
#include "dpad/memd.hpp"
#include "dpad/params.hpp"

namespace dpad {

struct DrdShape {
    std::size_t window = 336;
    std::size_t components = 6;
    std::size_t levels = 2;
    std::size_t hidden = 336;  // BGG projection width
    std::size_t mask_span = 3;
    SiftConfig sift;
    bool stop_gradient = false;  // decompose detached inputs
};

struct DrBlock {
    std::size_t level = 1;     // 1-based
    std::size_t position = 1;  // 1-based within the level
    BggParams guidance;
    std::array<nn::MlpParams, 2> branches;  // T -> T -> T each
};

/// P = query * key (T x 2); column c goes through branch MLP c.
std::pair<nn::Var, nn::Var> dr_reconstruct(const nn::Var& query, const nn::Var& key,
                                           const std::array<nn::MlpParams, 2>& branches);

std::pair<nn::Var, nn::Var> dr_block_forward(const nn::Var& x, const DrBlock& block,
                                             const DrdShape& shape);

class DrdTree {
public:
    DrdTree() = default;
    DrdTree(nn::ParameterSet& params, const DrdShape& shape, nn::Initializer& init);

    /// x is T x 1; returns T x output_components().
    nn::Var forward(const nn::Var& x) const;

    std::size_t output_components() const;
    const DrdShape& shape() const { return shape_; }
    /// blocks()[l - 1] lists the blocks of level l.
    const std::vector<std::vector<DrBlock>>& blocks() const { return blocks_; }

private:
    DrdShape shape_;
    std::vector<std::vector<DrBlock>> blocks_;
};

}  // namespace dpad
