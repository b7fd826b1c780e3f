// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kernels.hpp"
#include "tensor.hpp"

namespace siamdiff {

// Reverse-mode tape over dense tensors. The op set is exactly what the
// encoder, noise head and sequence head need; values are recorded on the
// forward pass and gradients replayed in reverse creation order.
class Tape {
   public:
    struct Var {
        int32_t id = -1;
        int64_t rows = 0, cols = 0;
        bool valid() const { return id >= 0; }
    };

    Var constant(Tensor value) { return make_leaf(std::move(value), false); }
    Var input(Tensor value, bool needs_grad) { return make_leaf(std::move(value), needs_grad); }

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var add_bias(Var x, Var bias);
    Var relu(Var x);
    Var concat_cols(const std::vector<Var>& xs);
    Var gather_rows(Var x, const IndexGroups& g);
    Var segment_sum(Var msgs, const IndexGroups& g);
    Var segment_mean(Var msgs, const IndexGroups& g);
    Var scale(Var x, double s);
    // out[s] = sum over positions p with g.idx[p]==s of weights[p] * dirs[p];
    // weights is (p x 1), dirs a (p x 3) constant.
    Var weighted_rows_sum(Var weights, const Tensor& dirs, const IndexGroups& g);
    // inv_denom * sum((x - target)^2) as a 1x1 scalar.
    Var sse(Var x, const Tensor& target, double inv_denom);
    // inv_denom * sum over rows of cross-entropy(softmax(logits_row), label).
    Var softmax_xent(Var logits, const std::vector<int>& labels, double inv_denom);
    Var add_scalars(Var a, Var b);

    const Tensor& value(Var v) const;
    void backward(Var scalar);
    bool has_grad(Var v) const;
    const Tensor& grad(Var v) const;

   private:
    // Backward closure: receives the tape and the id of the node it belongs
    // to (whose grad is the upstream gradient).
    using BackFn = std::function<void(Tape&, int32_t)>;

    struct Node {
        Tensor val;
        Tensor grad;
        bool needs_grad = false;
        bool grad_ready = false;
        BackFn back;
    };

    Var make_leaf(Tensor value, bool needs_grad);
    Var make_node(Tensor value, bool needs_grad, BackFn back);
    Node& node(Var v);
    const Node& node(Var v) const;
    Tensor& grad_buf(int32_t id);

    std::vector<Node> nodes_;
    bool backward_done_ = false;
};

}  // namespace siamdiff
