#include "lwpt/nets.hpp"

#include <cmath>
#include <stdexcept>

namespace lwpt::nn {

void init_mlp(ParamStore& store, const std::string& prefix, const std::vector<int>& dims, Rng& rng,
              double final_scale) {
    if (dims.size() < 2) throw std::invalid_argument("init_mlp: need at least one layer");
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        size_t in = static_cast<size_t>(dims[l]);
        size_t out = static_cast<size_t>(dims[l + 1]);
        double bound = 1.0 / std::sqrt(static_cast<double>(in));
        if (l + 2 == dims.size()) bound *= final_scale;
        Tensor w = Tensor::zeros({in, out});
        for (double& v : w.data) v = rng.uniform(-bound, bound);
        Tensor b = Tensor::zeros({1, out});
        for (double& v : b.data) v = rng.uniform(-bound, bound);
        std::string idx = std::to_string(l);
        store.add(prefix + ".w" + idx, std::move(w));
        store.add(prefix + ".b" + idx, std::move(b));
    }
}

Var dense(TapeSession& s, ParamStore& store, const std::string& w, const std::string& b, Var x) {
    return affine(x, s.param(store, w), s.param(store, b));
}

Var mlp_hidden_forward(TapeSession& s, ParamStore& store, const std::string& prefix, Var x,
                       int n_hidden, bool use_pfam, double omega) {
    Var h = x;
    for (int l = 0; l < n_hidden; ++l) {
        std::string idx = std::to_string(l);
        h = relu(dense(s, store, prefix + ".w" + idx, prefix + ".b" + idx, h));
        if (use_pfam) h = pfam(h, omega);
    }
    return h;
}

Var pfam(Var x, double omega) {
    const Tensor& xv = x.tape->value(x);
    if (xv.cols() < 2) throw std::domain_error("pfam: needs at least 2 features");
    Var mu = mean_cols(x);
    Var var = var_cols(x);
    Var num = scale(add_const(var, omega), 4.0);                       // [r,1]
    Var den = add(square(sub(x, mu)), add_const(scale(var, 2.0), 2.0 * omega));
    Var energy = div(num, den);                                        // [r,c]
    Var weights = sigmoid(recip(energy));
    return mul(weights, x);
}

SquashedSample sample_squashed(TapeSession& s, Var mu, Var log_sigma, const Tensor& eps) {
    Var sigma = exp_(log_sigma);
    Var eps_v = s.input(eps);
    Var u = add(mu, mul(eps_v, sigma));

    // Gaussian log-density of u under N(mu, sigma), with gradient flowing
    // through both u and the distribution parameters.
    Var z = div(sub(u, mu), sigma);
    constexpr double half_log_2pi = 0.91893853320467274178;  // 0.5*log(2*pi)
    Var dens_terms = add_const(sub(scale(square(z), -0.5), log_sigma), -half_log_2pi);
    Var log_gauss = sum_cols(dens_terms);

    // Change-of-variables correction for the tanh squash.
    Var a = tanh_(u);
    Var one_minus_a2 = add_const(neg(square(a)), 1.0 + kSquashEps);
    Var corr = sum_cols(log_(one_minus_a2));

    SquashedSample out;
    out.action = a;
    out.log_prob = sub(log_gauss, corr);
    out.pre_tanh = u;
    return out;
}

}  // namespace lwpt::nn
