#pragma once

#include <functional>
#include <vector>

#include "cgs/nn/tensor.hpp"

namespace cgs::nn {

// Define-by-run reverse-mode tape over a fixed set of primitives.
// Values are computed eagerly; backward() replays adjoints in reverse.
class Tape {
public:
    using Id = int;

    Id leaf(Tensor value);

    const Tensor& value(Id id) const { return nodes_[static_cast<size_t>(id)].value; }
    const Tensor& grad(Id id) const { return nodes_[static_cast<size_t>(id)].grad; }
    double scalar(Id id) const { return value(id).at(0); }

    // Elementwise
    Id add(Id a, Id b);
    Id mul(Id a, Id b);
    Id scale(Id a, double c);
    Id tanh_op(Id a);
    Id sigmoid_op(Id a);
    Id leaky_relu(Id a, double slope);

    // Linear algebra
    Id matmul(Id a, Id b);                // (m,n)x(n,k)->(m,k) or (m,n)x(n)->(m)
    Id affine(Id w, Id bias, Id x) { return add(matmul(w, x), bias); }
    Id dot(Id u, Id v);                   // rank-1 x rank-1 -> scalar
    Id scalar_mul(Id s, Id v);            // scalar node times tensor node
    Id sum_all(Id a);                     // -> scalar

    // Shape plumbing
    Id row(Id matrix, int r);
    Id element(Id vec, int i);
    Id stack(const std::vector<Id>& scalars);     // -> rank-1
    Id stack_rows(const std::vector<Id>& rows);   // -> rank-2
    Id mean_rows(Id matrix);                      // (m,n) -> (n)
    Id gather_mean(Id matrix, std::vector<int> row_indices);  // mean of selected rows

    // Reductions with structure
    Id softmax_row(Id vec);
    Id softmax_cross_entropy_row(Id scores, int target);  // -> scalar
    Id cosine(Id u, Id v);                                // -> scalar

    // Accumulate d(loss)/d(node) for every node; loss must be scalar.
    void backward(Id loss);

    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Tape&)> backprop;  // null for leaves
    };
    std::vector<Node> nodes_;

    Id push(Tensor value, std::function<void(Tape&)> backprop);
    Tensor& grad_mut(Id id) { return nodes_[static_cast<size_t>(id)].grad; }
};

}  // namespace cgs::nn
