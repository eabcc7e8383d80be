#include "dpad/ifm.hpp"

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad {

IfmParams make_ifm(nn::ParameterSet& params, const std::string& prefix, const IfmShape& shape,
                   nn::Initializer& init) {
    if (shape.graphs == 0) throw ConfigError("IF module needs at least one graph");
    if (shape.graphs * shape.mid_dim != shape.in_dim) {
        throw ConfigError("IF module: graphs * mid_dim must equal in_dim for the skip connection");
    }
    IfmParams p;
    const std::size_t t = shape.window;
    p.input_w = params.add(prefix + ".input.w", init.uniform(shape.in_dim, t, t));
    p.input_b = params.add(prefix + ".input.b", init.uniform(shape.in_dim, 1, t));
    for (std::size_t j = 0; j < shape.graphs; ++j) {
        const std::string g = prefix + ".graph" + std::to_string(j);
        GraphParams gp;
        gp.embed1_w = params.add(g + ".e1.w", init.uniform(shape.embed_dim, t, t));
        gp.embed1_b = params.add(g + ".e1.b", init.uniform(shape.embed_dim, 1, t));
        gp.embed2_w = params.add(g + ".e2.w", init.uniform(shape.embed_dim, t, t));
        gp.embed2_b = params.add(g + ".e2.b", init.uniform(shape.embed_dim, 1, t));
        gp.weight = params.add(g + ".weight",
                               init.uniform(shape.mid_dim, shape.in_dim, shape.in_dim));
        p.graphs.push_back(std::move(gp));
    }
    p.fuse_w = params.add(prefix + ".fuse.w", init.uniform(shape.out_dim, shape.in_dim, shape.in_dim));
    p.fuse_b = params.add(prefix + ".fuse.b", init.uniform(shape.out_dim, 1, shape.in_dim));
    return p;
}

nn::Var adaptive_adjacency(const nn::Var& e1, const nn::Var& e2, AdjacencyAxis axis) {
    if (!e1.value().same_shape(e2.value())) {
        throw ValidationError("adaptive_adjacency: embeddings differ in shape");
    }
    const nn::Var scores = nn::relu(nn::matmul(nn::transpose(e1), e2));
    return axis == AdjacencyAxis::Rows ? nn::softmax_rows(scores) : nn::softmax_cols(scores);
}

nn::Var graph_conv(const nn::Var& z_in, const nn::Var& adjacency, const nn::Var& w_g) {
    if (adjacency.rows() != z_in.cols() || adjacency.cols() != z_in.cols()) {
        throw ValidationError("graph_conv: adjacency must be N x N for N nodes");
    }
    if (w_g.cols() != z_in.rows()) {
        throw ValidationError("graph_conv: weight width does not match node features");
    }
    return nn::relu(nn::matmul(nn::matmul(w_g, z_in), adjacency));
}

nn::Var multi_graph_fuse(const nn::Var& z_in, const std::vector<nn::Var>& graph_outputs,
                         const nn::Var& fuse_w, const nn::Var& fuse_b) {
    nn::Var mixed = z_in;
    if (!graph_outputs.empty()) {
        const nn::Var stacked = nn::vcat(graph_outputs);
        if (!stacked.value().same_shape(z_in.value())) {
            throw ValidationError("multi_graph_fuse: stacked graph outputs do not match z_in");
        }
        mixed = nn::add(stacked, z_in);
    }
    return nn::sum_cols(nn::linear(fuse_w, mixed, fuse_b));
}

nn::Var interaction_fusion(const nn::Var& components, const IfmParams& p,
                           const IfmOptions& options) {
    const nn::Var z_in = nn::linear(p.input_w, components, p.input_b);
    std::vector<nn::Var> outputs;
    if (!options.disable_graphs) {
        outputs.reserve(p.graphs.size());
        for (const auto& g : p.graphs) {
            const nn::Var e1 = nn::linear(g.embed1_w, components, g.embed1_b);
            const nn::Var e2 = nn::linear(g.embed2_w, components, g.embed2_b);
            outputs.push_back(graph_conv(z_in, adaptive_adjacency(e1, e2, options.axis), g.weight));
        }
    }
    return multi_graph_fuse(z_in, outputs, p.fuse_w, p.fuse_b);
}

}  // namespace dpad
