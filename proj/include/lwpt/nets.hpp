#pragma once

#include <string>
#include <vector>

#include "lwpt/param_store.hpp"
#include "lwpt/rng.hpp"
#include "lwpt/tensor.hpp"

namespace lwpt::nn {

// Uniform +-1/sqrt(fan_in) init for a dense stack. dims = {in, h1, ..., out}.
// final_scale shrinks the last layer (used to start the actor near zero
// actions).
void init_mlp(ParamStore& store, const std::string& prefix, const std::vector<int>& dims, Rng& rng,
              double final_scale = 1.0);

// Applies layers prefix.w0/b0 .. w(n-1)/b(n-1) with relu after each, and an
// optional PFAM reweighting after each hidden activation.
Var mlp_hidden_forward(TapeSession& s, ParamStore& store, const std::string& prefix, Var x,
                       int n_hidden, bool use_pfam, double omega);

Var dense(TapeSession& s, ParamStore& store, const std::string& w, const std::string& b, Var x);

// Parameter-free attention: per sample, per-neuron energy
// e = 4(var+omega) / ((x-mean)^2 + 2 var + 2 omega), output sigmoid(1/e) * x.
// Fully differentiable through the feature statistics.
Var pfam(Var x, double omega);

struct SquashedSample {
    Var action;    // tanh(u), strictly inside (-1,1)
    Var log_prob;  // [batch,1], Gaussian log-density minus tanh log-det correction
    Var pre_tanh;  // u
};

// Reparameterized squashed-Gaussian draw; eps is held constant on the tape.
SquashedSample sample_squashed(TapeSession& s, Var mu, Var log_sigma, const Tensor& eps);

inline constexpr double kLogSigmaMin = -20.0;
inline constexpr double kLogSigmaMax = 2.0;
inline constexpr double kSquashEps = 1e-6;

}  // namespace lwpt::nn
