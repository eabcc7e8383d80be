#include "dpad/params.hpp"

#include <cmath>

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad::nn {

Var ParameterSet::add(std::string name, Matrix value) {
    if (contains(name)) throw ConfigError("duplicate parameter name: " + name);
    Var v = Var::parameter(std::move(value));
    entries_.emplace_back(std::move(name), v);
    return v;
}

const Var& ParameterSet::get(const std::string& name) const {
    for (const auto& [n, v] : entries_) {
        if (n == name) return v;
    }
    throw ConfigError("unknown parameter: " + name);
}

bool ParameterSet::contains(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.first == name) return true;
    }
    return false;
}

std::size_t ParameterSet::scalar_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.second.value().size();
    return n;
}

void ParameterSet::zero_grad() {
    for (auto& e : entries_) e.second.zero_grad();
}

Matrix Initializer::uniform(std::size_t rows, std::size_t cols, std::size_t fan_in) {
    Matrix m(rows, cols);
    if (zero_) return m;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in == 0 ? 1 : fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& v : m.storage()) v = dist(rng_);
    return m;
}

MlpParams make_mlp(ParameterSet& params, const std::string& prefix,
                   const std::vector<std::size_t>& widths, Initializer& init) {
    if (widths.size() < 2) throw ConfigError("make_mlp: need at least input and output width");
    MlpParams layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const std::size_t in = widths[i];
        const std::size_t out = widths[i + 1];
        if (in == 0 || out == 0) throw ConfigError("make_mlp: widths must be positive");
        const std::string idx = std::to_string(i);
        layers.weights.push_back(params.add(prefix + ".w" + idx, init.uniform(out, in, in)));
        layers.biases.push_back(params.add(prefix + ".b" + idx, init.uniform(out, 1, in)));
    }
    return layers;
}

Var mlp(const Var& x, const MlpParams& layers) {
    if (layers.weights.empty()) throw ValidationError("mlp: no layers");
    Var h = x;
    for (std::size_t i = 0; i < layers.weights.size(); ++i) {
        h = linear(layers.weights[i], h, layers.biases[i]);
        if (i + 1 < layers.weights.size()) h = relu(h);
    }
    return h;
}

}  // namespace dpad::nn
