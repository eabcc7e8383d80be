#pragma once

// Tape-free reverse-mode differentiation over dense matrices. Each operation
// produces a node that keeps its parents alive and a closure that pushes the
// node's gradient back into them. A graph belongs to the thread that built
// it; parameters (leaves) may be shared read-only across graphs.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dpad/tensor.hpp"

namespace dpad::nn {

struct Node {
    Matrix value;
    Matrix grad;  // allocated on first accumulation; same shape as value
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward_fn;
    bool requires_grad = false;

    /// Allocates a zero gradient of the value's shape if not yet present.
    Matrix& grad_buffer();
};

class Var {
public:
    Var() = default;
    explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

    static Var constant(Matrix value);
    /// Leaf that accumulates gradients.
    static Var parameter(Matrix value);

    bool defined() const { return node_ != nullptr; }
    const Matrix& value() const { return node_->value; }
    Matrix& mutable_value() { return node_->value; }
    /// Gradient accumulated so far; zeros if nothing reached this node.
    const Matrix& grad() const { return node_->grad_buffer(); }
    Matrix& mutable_grad() { return node_->grad_buffer(); }
    void zero_grad();

    std::size_t rows() const { return node_->value.rows(); }
    std::size_t cols() const { return node_->value.cols(); }
    bool requires_grad() const { return node_->requires_grad; }
    double item() const;

    /// Backpropagates from a 1x1 value with seed 1.
    void backward() const;
    /// Backpropagates with an explicit seed of the value's shape.
    void backward(const Matrix& seed) const;

    /// Same value, cut from the graph.
    Var detach() const { return constant(node_->value); }

    const std::shared_ptr<Node>& node() const { return node_; }

private:
    std::shared_ptr<Node> node_;
};

/// False inside a NoGradGuard scope on this thread.
bool grad_enabled();

class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

/// Wraps `value` as the output of an operation. The closure is kept only if
/// recording is enabled and some parent requires a gradient.
Var make_result(Matrix value, std::vector<Var> parents, std::function<void(Node&)> backward_fn);

}  // namespace dpad::nn
