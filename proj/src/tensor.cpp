#include "lwpt/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace lwpt::nn {

Tensor Tensor::zeros(std::vector<size_t> sh) {
    size_t n = 1;
    for (size_t d : sh) n *= d;
    return Tensor(std::move(sh), std::vector<double>(n, 0.0));
}

Tensor Tensor::full(std::vector<size_t> sh, double v) {
    size_t n = 1;
    for (size_t d : sh) n *= d;
    return Tensor(std::move(sh), std::vector<double>(n, v));
}

double Tensor::item() const {
    if (size() != 1) throw std::logic_error("Tensor::item on non-scalar");
    return data[0];
}

namespace {

void check_finite(const Tensor& t, const char* op) {
    for (double v : t.data)
        if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value produced by op '") + op + "'");
}

struct Bcast {
    size_t r, c;       // output dims
    size_t ar, ac, br, bc;
};

Bcast bcast_dims(const Tensor& a, const Tensor& b, const char* op) {
    Bcast d{0, 0, a.rows(), a.cols(), b.rows(), b.cols()};
    auto one_or_eq = [](size_t x, size_t y) { return x == y || x == 1 || y == 1; };
    if (!one_or_eq(d.ar, d.br) || !one_or_eq(d.ac, d.bc))
        throw std::invalid_argument(std::string(op) + ": incompatible shapes");
    d.r = std::max(d.ar, d.br);
    d.c = std::max(d.ac, d.bc);
    return d;
}

// Accumulate a gradient of the broadcast output back into the (possibly
// smaller) operand, summing over broadcast dimensions.
void reduce_into(Tensor& dst, const Tensor& g, size_t gr, size_t gc) {
    size_t dr = dst.rows(), dc = dst.cols();
    for (size_t i = 0; i < gr; ++i)
        for (size_t j = 0; j < gc; ++j)
            dst.data[(dr == 1 ? 0 : i) * dc + (dc == 1 ? 0 : j)] += g.at(i, j);
}

using BinF = double (*)(double, double);
using BinD = double (*)(double, double, double);  // (grad, a, b) -> contribution

Var binary(const char* op, Var a, Var b, BinF f, BinD dfa, BinD dfb) {
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    Bcast d = bcast_dims(av, bv, op);
    Tensor out = Tensor::zeros({d.r, d.c});
    for (size_t i = 0; i < d.r; ++i)
        for (size_t j = 0; j < d.c; ++j)
            out.at(i, j) = f(av.at(d.ar == 1 ? 0 : i, d.ac == 1 ? 0 : j),
                             bv.at(d.br == 1 ? 0 : i, d.bc == 1 ? 0 : j));
    int ia = a.id, ib = b.id;
    return t.make(op, std::move(out), {ia, ib}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        const Tensor& va = tp.value(ia);
        const Tensor& vb = tp.value(ib);
        size_t ar = va.rows(), ac = va.cols(), br = vb.rows(), bc = vb.cols();
        size_t gr = g.rows(), gc = g.cols();
        Tensor ga = Tensor::zeros({gr, gc});
        Tensor gb = Tensor::zeros({gr, gc});
        for (size_t i = 0; i < gr; ++i)
            for (size_t j = 0; j < gc; ++j) {
                double x = va.at(ar == 1 ? 0 : i, ac == 1 ? 0 : j);
                double y = vb.at(br == 1 ? 0 : i, bc == 1 ? 0 : j);
                double gv = g.at(i, j);
                ga.at(i, j) = dfa(gv, x, y);
                gb.at(i, j) = dfb(gv, x, y);
            }
        reduce_into(tp.grad_mut(ia), ga, gr, gc);
        reduce_into(tp.grad_mut(ib), gb, gr, gc);
    });
}

using UnF = double (*)(double);
using UnD = double (*)(double, double, double);  // (grad, x, out) -> contribution

Var unary(const char* op, Var a, UnF f, UnD df) {
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    Tensor out = av;
    for (double& v : out.data) v = f(v);
    int ia = a.id;
    return t.make(op, std::move(out), {ia}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        const Tensor& x = tp.value(ia);
        const Tensor& y = tp.value(self);
        Tensor& ga = tp.grad_mut(ia);
        for (size_t k = 0; k < g.size(); ++k) ga.data[k] += df(g.data[k], x.data[k], y.data[k]);
    });
}

}  // namespace

Var Tape::leaf(Tensor value) {
    check_finite(value, "leaf");
    nodes_.push_back(Node{std::move(value), Tensor{}, {}, nullptr, "leaf"});
    return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Var Tape::make(const char* op, Tensor value, std::vector<int> parents,
               std::function<void(Tape&, int)> backward) {
    check_finite(value, op);
    nodes_.push_back(Node{std::move(value), Tensor{}, std::move(parents), std::move(backward), op});
    return Var{this, static_cast<int>(nodes_.size() - 1)};
}

const Tensor& Tape::value(Var v) const { return nodes_.at(v.id).value; }

const Tensor& Tape::grad(Var v) const {
    const Node& n = nodes_.at(v.id);
    if (n.grad.size() == 0) throw std::logic_error("Tape::grad before backward");
    return n.grad;
}

void Tape::backward(Var loss) {
    if (!value(loss).is_scalar()) throw std::logic_error("Tape::backward: loss must be scalar");
    for (Node& n : nodes_) n.grad = Tensor::zeros({n.value.rows(), n.value.cols()});
    nodes_[loss.id].grad.data[0] = 1.0;
    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.backward) n.backward(*this, i);
    }
}

Var add(Var a, Var b) {
    return binary("add", a, b, [](double x, double y) { return x + y; },
                  [](double g, double, double) { return g; },
                  [](double g, double, double) { return g; });
}

Var sub(Var a, Var b) {
    return binary("sub", a, b, [](double x, double y) { return x - y; },
                  [](double g, double, double) { return g; },
                  [](double g, double, double) { return -g; });
}

Var mul(Var a, Var b) {
    return binary("mul", a, b, [](double x, double y) { return x * y; },
                  [](double g, double, double y) { return g * y; },
                  [](double g, double x, double) { return g * x; });
}

Var div(Var a, Var b) {
    return binary("div", a, b, [](double x, double y) { return x / y; },
                  [](double g, double, double y) { return g / y; },
                  [](double g, double x, double y) { return -g * x / (y * y); });
}

Var minimum(Var a, Var b) {
    return binary("minimum", a, b, [](double x, double y) { return x < y ? x : y; },
                  [](double g, double x, double y) { return x <= y ? g : 0.0; },
                  [](double g, double x, double y) { return x <= y ? 0.0 : g; });
}

Var neg(Var a) {
    return unary("neg", a, [](double x) { return -x; },
                 [](double g, double, double) { return -g; });
}

Var relu(Var a) {
    return unary("relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double g, double x, double) { return x > 0.0 ? g : 0.0; });
}

Var tanh_(Var a) {
    return unary("tanh", a, [](double x) { return std::tanh(x); },
                 [](double g, double, double y) { return g * (1.0 - y * y); });
}

Var sigmoid(Var a) {
    return unary("sigmoid", a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
                 [](double g, double, double y) { return g * y * (1.0 - y); });
}

Var exp_(Var a) {
    return unary("exp", a, [](double x) { return std::exp(x); },
                 [](double g, double, double y) { return g * y; });
}

Var log_(Var a) {
    const Tensor& av = a.tape->value(a);
    for (double v : av.data)
        if (v <= 0.0) throw std::domain_error("log: input must be positive");
    return unary("log", a, [](double x) { return std::log(x); },
                 [](double g, double x, double) { return g / x; });
}

Var square(Var a) {
    return unary("square", a, [](double x) { return x * x; },
                 [](double g, double x, double) { return 2.0 * g * x; });
}

Var recip(Var a) {
    return unary("recip", a, [](double x) { return 1.0 / x; },
                 [](double g, double, double y) { return -g * y * y; });
}

Var scale(Var a, double c) {
    Tape& t = *a.tape;
    Tensor out = t.value(a);
    for (double& v : out.data) v *= c;
    int ia = a.id;
    return t.make("scale", std::move(out), {ia}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        Tensor& ga = tp.grad_mut(ia);
        for (size_t k = 0; k < g.size(); ++k) ga.data[k] += c * g.data[k];
    });
}

Var add_const(Var a, double c) {
    Tape& t = *a.tape;
    Tensor out = t.value(a);
    for (double& v : out.data) v += c;
    int ia = a.id;
    return t.make("add_const", std::move(out), {ia}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        Tensor& ga = tp.grad_mut(ia);
        for (size_t k = 0; k < g.size(); ++k) ga.data[k] += g.data[k];
    });
}

Var clamp(Var a, double lo, double hi) {
    Tape& t = *a.tape;
    Tensor out = t.value(a);
    for (double& v : out.data) v = v < lo ? lo : (v > hi ? hi : v);
    int ia = a.id;
    return t.make("clamp", std::move(out), {ia}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        const Tensor& x = tp.value(ia);
        Tensor& ga = tp.grad_mut(ia);
        for (size_t k = 0; k < g.size(); ++k)
            if (x.data[k] > lo && x.data[k] < hi) ga.data[k] += g.data[k];
    });
}

Var matmul(Var a, Var b) {
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    size_t m = av.rows(), k = av.cols(), k2 = bv.rows(), n = bv.cols();
    if (k != k2) throw std::invalid_argument("matmul: inner dimensions disagree");
    Tensor out = Tensor::zeros({m, n});
    for (size_t i = 0; i < m; ++i)
        for (size_t p = 0; p < k; ++p) {
            double aip = av.at(i, p);
            if (aip == 0.0) continue;
            for (size_t j = 0; j < n; ++j) out.at(i, j) += aip * bv.at(p, j);
        }
    int ia = a.id, ib = b.id;
    return t.make("matmul", std::move(out), {ia, ib}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        const Tensor& va = tp.value(ia);
        const Tensor& vb = tp.value(ib);
        Tensor& ga = tp.grad_mut(ia);
        Tensor& gb = tp.grad_mut(ib);
        // dA += G * B^T
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < n; ++j) {
                double gij = g.at(i, j);
                if (gij == 0.0) continue;
                for (size_t p = 0; p < k; ++p) ga.at(i, p) += gij * vb.at(p, j);
            }
        // dB += A^T * G
        for (size_t i = 0; i < m; ++i)
            for (size_t p = 0; p < k; ++p) {
                double aip = va.at(i, p);
                if (aip == 0.0) continue;
                for (size_t j = 0; j < n; ++j) gb.at(p, j) += aip * g.at(i, j);
            }
    });
}

Var affine(Var x, Var w, Var b) { return add(matmul(x, w), b); }

Var concat_cols(Var a, Var b) {
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    const Tensor& bv = t.value(b);
    if (av.rows() != bv.rows()) throw std::invalid_argument("concat_cols: row mismatch");
    size_t r = av.rows(), ca = av.cols(), cb = bv.cols();
    Tensor out = Tensor::zeros({r, ca + cb});
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < ca; ++j) out.at(i, j) = av.at(i, j);
        for (size_t j = 0; j < cb; ++j) out.at(i, ca + j) = bv.at(i, j);
    }
    int ia = a.id, ib = b.id;
    return t.make("concat_cols", std::move(out), {ia, ib}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        Tensor& ga = tp.grad_mut(ia);
        Tensor& gb = tp.grad_mut(ib);
        for (size_t i = 0; i < r; ++i) {
            for (size_t j = 0; j < ca; ++j) ga.at(i, j) += g.at(i, j);
            for (size_t j = 0; j < cb; ++j) gb.at(i, j) += g.at(i, ca + j);
        }
    });
}

Var sum_all(Var a) {
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    double s = 0.0;
    for (double v : av.data) s += v;
    int ia = a.id;
    return t.make("sum_all", Tensor::scalar(s), {ia}, [=](Tape& tp, int self) {
        double g = tp.grad_mut(self).data[0];
        Tensor& ga = tp.grad_mut(ia);
        for (double& v : ga.data) v += g;
    });
}

Var mean_all(Var a) {
    size_t n = a.tape->value(a).size();
    return scale(sum_all(a), 1.0 / static_cast<double>(n));
}

Var sum_cols(Var a) {
    Tape& t = *a.tape;
    const Tensor& av = t.value(a);
    size_t r = av.rows(), c = av.cols();
    Tensor out = Tensor::zeros({r, 1});
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) out.data[i] += av.at(i, j);
    int ia = a.id;
    return t.make("sum_cols", std::move(out), {ia}, [=](Tape& tp, int self) {
        const Tensor& g = tp.grad_mut(self);
        Tensor& ga = tp.grad_mut(ia);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) ga.at(i, j) += g.data[i];
    });
}

Var mean_cols(Var a) {
    size_t c = a.tape->value(a).cols();
    return scale(sum_cols(a), 1.0 / static_cast<double>(c));
}

Var var_cols(Var a) {
    // Population variance; gradients flow through the mean.
    Var mu = mean_cols(a);
    return mean_cols(square(sub(a, mu)));
}

}  // namespace lwpt::nn
