#include "dpad/autodiff.hpp"

#include <unordered_set>

#include "dpad/error.hpp"

namespace dpad::nn {
namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

Matrix& Node::grad_buffer() {
    if (!grad.same_shape(value)) grad = Matrix(value.rows(), value.cols());
    return grad;
}

Var Var::constant(Matrix value) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    return Var(std::move(node));
}

Var Var::parameter(Matrix value) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    node->requires_grad = true;
    node->grad_buffer();
    return Var(std::move(node));
}

void Var::zero_grad() { node_->grad_buffer().fill(0.0); }

double Var::item() const {
    if (node_->value.size() != 1) throw ValidationError("item: value is not a scalar");
    return node_->value[0];
}

void Var::backward() const {
    if (node_->value.size() != 1) {
        throw ValidationError("backward: implicit seed requires a scalar output");
    }
    backward(Matrix(1, 1, 1.0));
}

void Var::backward(const Matrix& seed) const {
    if (!seed.same_shape(node_->value)) throw ValidationError("backward: seed shape mismatch");
    if (!node_->requires_grad) return;

    // Iterative post-order DFS gives a topological order (parents first).
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack;
    stack.emplace_back(node_.get(), 0);
    visited.insert(node_.get());
    while (!stack.empty()) {
        auto& [n, next] = stack.back();
        if (next < n->parents.size()) {
            Node* p = n->parents[next++].get();
            if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(n);
            stack.pop_back();
        }
    }

    node_->grad_buffer() += seed;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (!n->backward_fn) continue;
        n->grad_buffer();
        n->backward_fn(*n);
        // Interior gradients are not needed once propagated.
        if (n != node_.get()) n->grad = Matrix();
    }
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Var make_result(Matrix value, std::vector<Var> parents, std::function<void(Node&)> backward_fn) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    if (!g_grad_enabled) return Var(std::move(node));
    bool any = false;
    for (const auto& p : parents) any = any || p.requires_grad();
    if (!any) return Var(std::move(node));
    node->requires_grad = true;
    node->parents.reserve(parents.size());
    for (auto& p : parents) node->parents.push_back(p.node());
    node->backward_fn = std::move(backward_fn);
    return Var(std::move(node));
}

}  // namespace dpad::nn
