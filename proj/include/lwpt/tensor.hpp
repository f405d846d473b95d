#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

// Minimal reverse-mode autodiff: dense 64-bit tensors, an append-only tape
// of ops, and backward closures that accumulate exact gradients in reverse
// creation order. Rank <= 2 only; rank-1 tensors behave as [1, n] rows.

namespace lwpt::nn {

struct Tensor {
    std::vector<size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<size_t> sh, std::vector<double> d) : shape(std::move(sh)), data(std::move(d)) {}

    static Tensor zeros(std::vector<size_t> sh);
    static Tensor full(std::vector<size_t> sh, double v);
    static Tensor scalar(double v) { return Tensor({1, 1}, {v}); }
    static Tensor row(std::vector<double> d) {
        size_t n = d.size();  // read before the move; argument order is unspecified
        return Tensor({1, n}, std::move(d));
    }

    size_t size() const { return data.size(); }
    size_t rows() const { return shape.size() == 2 ? shape[0] : 1; }
    size_t cols() const { return shape.empty() ? 1 : shape.back(); }
    double& at(size_t r, size_t c) { return data[r * cols() + c]; }
    double at(size_t r, size_t c) const { return data[r * cols() + c]; }
    bool is_scalar() const { return size() == 1; }
    double item() const;
};

class Tape;

struct Var {
    Tape* tape = nullptr;
    int id = -1;
};

class Tape {
public:
    // Differentiable leaf (parameters, inputs). Constants are leaves whose
    // gradients are simply never read.
    Var leaf(Tensor value);

    Var make(const char* op, Tensor value, std::vector<int> parents,
             std::function<void(Tape&, int)> backward);

    const Tensor& value(Var v) const;
    const Tensor& value(int id) const { return nodes_[id].value; }
    const Tensor& grad(Var v) const;
    Tensor& grad_mut(int id) { return nodes_[id].grad; }

    // Seeds d(loss)/d(loss) = 1 and walks the tape in strict reverse
    // creation order. loss must be scalar.
    void backward(Var loss);

    size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;  // allocated lazily at backward time
        std::vector<int> parents;
        std::function<void(Tape&, int)> backward;
        const char* op = "";
    };
    std::vector<Node> nodes_;
};

// Elementwise binary ops with 2-D broadcasting (each dim equal or 1).
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);
Var minimum(Var a, Var b);  // subgradient routes to the smaller input

// Unary
Var neg(Var a);
Var scale(Var a, double c);
Var add_const(Var a, double c);
Var relu(Var a);
Var tanh_(Var a);
Var sigmoid(Var a);
Var exp_(Var a);
Var log_(Var a);
Var square(Var a);
Var recip(Var a);
Var clamp(Var a, double lo, double hi);  // zero gradient outside [lo, hi]

// Linear algebra
Var matmul(Var a, Var b);                 // [m,k] x [k,n]
Var affine(Var x, Var w, Var b);          // x*w + row-broadcast bias
Var concat_cols(Var a, Var b);            // [r,ca] ++ [r,cb]

// Reductions
Var sum_all(Var a);    // -> [1,1]
Var mean_all(Var a);   // -> [1,1]
Var sum_cols(Var a);   // sum along the feature axis -> [r,1]
Var mean_cols(Var a);  // -> [r,1]

// mean/population-variance along the feature axis, kept as [r,1];
// composed from primitives so gradients flow through the statistics.
Var var_cols(Var a);

}  // namespace lwpt::nn
