#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "voxsplat/tensor.hpp"

namespace voxsplat {

// Learnable quantity. Gradients accumulate across backward passes until the
// caller zeroes them (the optimizer does not clear).
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, Tensor v)
        : name(std::move(n)), value(std::move(v)), grad(Tensor::zeros_like(value)) {}

    void zero_grad() { grad.fill(0.0); }
};

// Flat forward trace. Each op records its output value, parent ids and a
// vector-Jacobian product; backward() walks the trace in reverse.
class Tape {
  public:
    using BackwardFn =
        std::function<void(const Tensor& g, const std::vector<Tensor*>& parent_grads)>;

    int leaf(Tensor v, Parameter* bind = nullptr) {
        nodes_.push_back(Node{std::move(v), {}, nullptr, bind});
        return int(nodes_.size()) - 1;
    }

    int node(Tensor v, std::vector<int> parents, BackwardFn fn) {
        for (int p : parents)
            if (p < 0 || p >= int(nodes_.size())) throw std::logic_error("tape: bad parent id");
        nodes_.push_back(Node{std::move(v), std::move(parents), std::move(fn), nullptr});
        return int(nodes_.size()) - 1;
    }

    const Tensor& val(int id) const { return nodes_[id].value; }

    const Tensor& grad(int id) const {
        if (grads_.empty()) throw std::logic_error("tape: grad read before backward");
        return grads_[id];
    }

    // Seeds d(loss)/d(loss)=1 and runs every VJP in reverse creation order.
    // Leaf grads are accumulated into their bound Parameters at the end.
    void backward(int loss) {
        if (nodes_[loss].value.size() != 1)
            throw std::invalid_argument("tape backward: loss must be scalar");
        grads_.assign(nodes_.size(), Tensor());
        for (std::size_t i = 0; i < nodes_.size(); ++i) grads_[i] = Tensor::zeros_like(nodes_[i].value);
        grads_[loss].data[0] = 1.0;
        for (int i = loss; i >= 0; --i) {
            Node& n = nodes_[i];
            if (!n.backward) continue;
            std::vector<Tensor*> pg(n.parents.size());
            for (std::size_t j = 0; j < n.parents.size(); ++j) pg[j] = &grads_[n.parents[j]];
            n.backward(grads_[i], pg);
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].bound) nodes_[i].bound->grad += grads_[i];
    }

    std::size_t size() const { return nodes_.size(); }

  private:
    struct Node {
        Tensor value;
        std::vector<int> parents;
        BackwardFn backward;
        Parameter* bound;
    };
    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
};

// Light handle used by all ops.
struct Var {
    Tape* t = nullptr;
    int id = -1;
    const Tensor& val() const { return t->val(id); }
    const Tensor& grad() const { return t->grad(id); }
};

inline Var watch(Tape& t, Parameter& p) { return Var{&t, t.leaf(p.value, &p)}; }

inline Var constant(Tape& t, Tensor v) { return Var{&t, t.leaf(std::move(v))}; }

}  // namespace voxsplat
