#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dpad/autodiff.hpp"

namespace dpad::nn {

/// Ordered collection of named learnable leaves.
class ParameterSet {
public:
    /// Registers a parameter; throws ConfigError on a duplicate name.
    Var add(std::string name, Matrix value);
    const Var& get(const std::string& name) const;
    bool contains(const std::string& name) const;

    const std::vector<std::pair<std::string, Var>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t scalar_count() const;
    void zero_grad();

private:
    std::vector<std::pair<std::string, Var>> entries_;
};

/// Draws affine-layer weights uniformly in [-1/sqrt(fan_in), 1/sqrt(fan_in)]
/// from a seeded generator, or zeros when built with zero_init.
class Initializer {
public:
    explicit Initializer(std::uint64_t seed, bool zero_init = false)
        : rng_(seed), zero_(zero_init) {}

    Matrix uniform(std::size_t rows, std::size_t cols, std::size_t fan_in);
    bool zero_init() const { return zero_; }

private:
    std::mt19937_64 rng_;
    bool zero_;
};

/// Stack of affine layers; weight i is out_i x in_i, bias i is out_i x 1.
struct MlpParams {
    std::vector<Var> weights;
    std::vector<Var> biases;

    std::size_t in_width() const { return weights.front().cols(); }
    std::size_t out_width() const { return weights.back().rows(); }
};

/// Registers `<prefix>.w<i>` / `<prefix>.b<i>` for the layer chain `widths`
/// (at least two entries: input width ... output width).
MlpParams make_mlp(ParameterSet& params, const std::string& prefix,
                   const std::vector<std::size_t>& widths, Initializer& init);

/// Affine + ReLU for every layer but the last, which stays affine.
/// `x` is in_width x n; each column is mapped independently.
Var mlp(const Var& x, const MlpParams& layers);

}  // namespace dpad::nn
