#pragma once

// Interaction and fusion over the N disentangled components. Every component
// is a graph node; a self-adaptive adjacency is learned from two node
// embeddings, M graph convolutions run in parallel, their outputs are stacked
// with a skip connection and projected, then summed over the nodes.

#include <string>
#include <vector>

#include "dpad/autodiff.hpp"
#include "dpad/params.hpp"

namespace dpad {

enum class AdjacencyAxis { Rows, Cols };

struct GraphParams {
    nn::Var embed1_w;  // d_em x T
    nn::Var embed1_b;  // d_em x 1
    nn::Var embed2_w;
    nn::Var embed2_b;
    nn::Var weight;  // d_mid x d_in
};

struct IfmShape {
    std::size_t window = 336;  // T
    std::size_t embed_dim = 336;
    std::size_t in_dim = 336;
    std::size_t mid_dim = 336;
    std::size_t out_dim = 336;
    std::size_t graphs = 1;  // M; graphs * mid_dim must equal in_dim
};

struct IfmParams {
    nn::Var input_w;  // d_in x T
    nn::Var input_b;  // d_in x 1
    std::vector<GraphParams> graphs;
    nn::Var fuse_w;  // d_out x d_in
    nn::Var fuse_b;  // d_out x 1
};

struct IfmOptions {
    AdjacencyAxis axis = AdjacencyAxis::Rows;
    bool disable_graphs = false;  // skip path only
};

/// Throws ConfigError when graphs * mid_dim != in_dim.
IfmParams make_ifm(nn::ParameterSet& params, const std::string& prefix, const IfmShape& shape,
                   nn::Initializer& init);

/// softmax(relu(e1^T e2)) for d_em x N embeddings, normalised along `axis`.
nn::Var adaptive_adjacency(const nn::Var& e1, const nn::Var& e2,
                           AdjacencyAxis axis = AdjacencyAxis::Rows);

/// relu(w_g * z_in * adjacency): (d_mid x d_in)(d_in x N)(N x N).
nn::Var graph_conv(const nn::Var& z_in, const nn::Var& adjacency, const nn::Var& w_g);

/// Stacks the graph outputs along features, adds z_in, applies the per-node
/// projection and sums over nodes -> d_out x 1. With no graph outputs the
/// stack is taken as zero (pure skip path).
nn::Var multi_graph_fuse(const nn::Var& z_in, const std::vector<nn::Var>& graph_outputs,
                         const nn::Var& fuse_w, const nn::Var& fuse_b);

/// Full module on a T x N component matrix -> d_out x 1.
nn::Var interaction_fusion(const nn::Var& components, const IfmParams& p,
                           const IfmOptions& options = {});

}  // namespace dpad
