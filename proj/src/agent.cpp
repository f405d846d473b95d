#include "lwpt/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lwpt {

using nn::Tensor;
using nn::TapeSession;
using nn::Var;

SacPpvAgent::SacPpvAgent(int state_dim, AgentConfig cfg, uint64_t init_seed)
    : state_dim_(state_dim), cfg_(std::move(cfg)) {
    cfg_.validate();
    Rng rng(init_seed);
    std::vector<int> actor_dims{state_dim_};
    for (int h : cfg_.hidden) actor_dims.push_back(h);
    nn::init_mlp(actor_, "h", actor_dims, rng);
    int top = cfg_.hidden.back();
    nn::init_mlp(actor_, "mu", {top, kActionDim}, rng, 1e-2);
    nn::init_mlp(actor_, "sig", {top, kActionDim}, rng, 1e-2);

    std::vector<int> critic_dims{state_dim_ + kActionDim};
    for (int h : cfg_.hidden) critic_dims.push_back(h);
    critic_dims.push_back(1);
    nn::init_mlp(critic1_, "q", critic_dims, rng);
    nn::init_mlp(critic2_, "q", critic_dims, rng);
    target1_ = nn::clone_params(critic1_);
    target2_ = nn::clone_params(critic2_);

    log_alpha_ = std::log(cfg_.init_alpha);
}

double SacPpvAgent::alpha() const { return std::exp(log_alpha_); }

SacPpvAgent::ActorHeads SacPpvAgent::actor_forward(TapeSession& s, Var x) {
    Var h = nn::mlp_hidden_forward(s, actor_, "h", x, static_cast<int>(cfg_.hidden.size()),
                                   cfg_.use_pfam, cfg_.pfam_omega);
    ActorHeads out;
    out.mu = nn::dense(s, actor_, "mu.w0", "mu.b0", h);
    out.log_sigma = nn::clamp(nn::dense(s, actor_, "sig.w0", "sig.b0", h), nn::kLogSigmaMin,
                              nn::kLogSigmaMax);
    return out;
}

Var SacPpvAgent::critic_forward(TapeSession& s, nn::ParamStore& store, Var state_action) {
    int n_hidden = static_cast<int>(cfg_.hidden.size());
    Var h = state_action;
    for (int l = 0; l < n_hidden; ++l) {
        std::string idx = std::to_string(l);
        h = nn::relu(nn::dense(s, store, "q.w" + idx, "q.b" + idx, h));
    }
    std::string idx = std::to_string(n_hidden);
    return nn::dense(s, store, "q.w" + idx, "q.b" + idx, h);
}

std::array<double, 3> SacPpvAgent::act(const std::vector<double>& state, bool deterministic,
                                       Rng& rng, double* log_prob) {
    if (static_cast<int>(state.size()) != state_dim_)
        throw std::invalid_argument("act: state dimension mismatch");
    TapeSession s;
    Var x = s.input(Tensor({1, state.size()}, state));
    ActorHeads heads = actor_forward(s, x);
    Tensor eps = Tensor::zeros({1, kActionDim});
    if (!deterministic)
        for (double& e : eps.data) e = rng.normal();
    nn::SquashedSample sample = nn::sample_squashed(s, heads.mu, heads.log_sigma, eps);
    const Tensor& a = s.tape.value(sample.action);
    if (log_prob) *log_prob = s.tape.value(sample.log_prob).item();
    return {a.data[0], a.data[1], a.data[2]};
}

SacPpvAgent::Batch SacPpvAgent::make_batch(const ReplayBuffer::Sample& sample) {
    size_t b = sample.items.size();
    if (b == 0) throw std::invalid_argument("make_batch: empty sample");
    size_t sdim = sample.items[0]->s.size();
    Batch out;
    out.s = Tensor::zeros({b, sdim});
    out.a = Tensor::zeros({b, static_cast<size_t>(kActionDim)});
    out.r = Tensor::zeros({b, 1});
    out.s_next = Tensor::zeros({b, sdim});
    out.done = Tensor::zeros({b, 1});
    out.weights = Tensor::zeros({b, 1});
    out.behavior_logp = Tensor::zeros({b, 1});
    for (size_t i = 0; i < b; ++i) {
        const Transition& tr = *sample.items[i];
        std::copy(tr.s.begin(), tr.s.end(), out.s.data.begin() + i * sdim);
        std::copy(tr.a.begin(), tr.a.end(), out.a.data.begin() + i * kActionDim);
        out.r.data[i] = tr.r;
        std::copy(tr.s_next.begin(), tr.s_next.end(), out.s_next.data.begin() + i * sdim);
        out.done.data[i] = tr.done ? 1.0 : 0.0;
        out.weights.data[i] = sample.weights[i];
        out.behavior_logp.data[i] = tr.behavior_logp;
    }
    return out;
}

SacPpvAgent::UpdateStats SacPpvAgent::update(const Batch& batch, Rng& rng) {
    size_t b = batch.size();
    Tensor eps_next = Tensor::zeros({b, static_cast<size_t>(kActionDim)});
    Tensor eps_cur = Tensor::zeros({b, static_cast<size_t>(kActionDim)});
    for (double& e : eps_next.data) e = rng.normal();
    for (double& e : eps_cur.data) e = rng.normal();
    return update_batch(batch, eps_next, eps_cur);
}

SacPpvAgent::UpdateStats SacPpvAgent::update_batch(const Batch& batch, const Tensor& eps_next,
                                                   const Tensor& eps_cur) {
    size_t b = batch.size();
    double cur_alpha = alpha();
    double r_center = cfg_.use_vrc ? r_bar_ : 0.0;
    UpdateStats stats;

    // ---- Targets: fresh a' from the current actor, twin-minimum target
    // critics, entropy bonus; evaluated without gradients.
    std::vector<double> y(b);
    {
        TapeSession ts;
        Var xs = ts.input(batch.s_next);
        ActorHeads heads = actor_forward(ts, xs);
        nn::SquashedSample next = nn::sample_squashed(ts, heads.mu, heads.log_sigma, eps_next);
        Var sa = nn::concat_cols(xs, next.action);
        Var q1 = critic_forward(ts, target1_, sa);
        Var q2 = critic_forward(ts, target2_, sa);
        const Tensor& q1v = ts.tape.value(q1);
        const Tensor& q2v = ts.tape.value(q2);
        const Tensor& lpv = ts.tape.value(next.log_prob);
        for (size_t i = 0; i < b; ++i) {
            double qmin = std::min(q1v.data[i], q2v.data[i]);
            y[i] = q_target(batch.r.data[i], r_center, cfg_.gamma, batch.done.data[i] != 0.0, qmin,
                            lpv.data[i], cur_alpha);
        }
    }

    // ---- Critic step: weighted MSBE over both critics.
    double mean_signed_td = 0.0;
    {
        TapeSession cs;
        Var xs = cs.input(batch.s);
        Var xa = cs.input(batch.a);
        Var sa = nn::concat_cols(xs, xa);
        Var q1 = critic_forward(cs, critic1_, sa);
        Var q2 = critic_forward(cs, critic2_, sa);
        Tensor yt({b, 1}, y);
        Var yv = cs.input(yt);
        Var w = cs.input(batch.weights);
        Var se = nn::add(nn::square(nn::sub(q1, yv)), nn::square(nn::sub(q2, yv)));
        Var loss = nn::mean_all(nn::mul(w, nn::scale(se, 0.5)));
        stats.critic_loss = cs.tape.value(loss).item();
        cs.backward(loss);
        nn::adam_step(critic1_, cfg_.lr);
        nn::adam_step(critic2_, cfg_.lr);
        critic1_.zero_grad();
        critic2_.zero_grad();

        const Tensor& q1v = cs.tape.value(q1);
        const Tensor& q2v = cs.tape.value(q2);
        std::vector<double> rho(b, 1.0);
        if (cfg_.use_vrc && cfg_.vrc_clipped_rho) rho = importance_ratios(batch);
        stats.td_abs.resize(b);
        for (size_t i = 0; i < b; ++i) {
            double d1 = y[i] - q1v.data[i];
            double d2 = y[i] - q2v.data[i];
            stats.td_abs[i] = std::min(std::abs(d1), std::abs(d2));
            mean_signed_td += rho[i] * 0.5 * (d1 + d2);
        }
        mean_signed_td /= static_cast<double>(b);
    }

    // ---- VRC bookkeeping: one centering step per gradient batch.
    if (cfg_.use_vrc) vrc_update(mean_signed_td);

    // ---- Actor step: reparameterized Q-ascent with entropy bonus; critics
    // participate in the graph but only the actor is stepped.
    double mean_logp = 0.0;
    {
        TapeSession as;
        Var xs = as.input(batch.s);
        ActorHeads heads = actor_forward(as, xs);
        nn::SquashedSample cur = nn::sample_squashed(as, heads.mu, heads.log_sigma, eps_cur);
        Var sa = nn::concat_cols(xs, cur.action);
        Var q1 = critic_forward(as, critic1_, sa);
        Var q2 = critic_forward(as, critic2_, sa);
        Var qmin = nn::minimum(q1, q2);
        Var loss = nn::mean_all(nn::sub(nn::scale(cur.log_prob, cur_alpha), qmin));
        stats.actor_loss = as.tape.value(loss).item();
        as.backward(loss);
        nn::adam_step(actor_, cfg_.lr);
        actor_.zero_grad();
        critic1_.zero_grad();
        critic2_.zero_grad();

        const Tensor& lpv = as.tape.value(cur.log_prob);
        for (size_t i = 0; i < b; ++i) mean_logp += lpv.data[i];
        mean_logp /= static_cast<double>(b);
    }

    // ---- Temperature: scalar Adam step on log(alpha) toward the target
    // entropy.
    {
        double grad = -cur_alpha * (mean_logp + cfg_.target_entropy);
        alpha_t_ += 1;
        alpha_m_ = 0.9 * alpha_m_ + 0.1 * grad;
        alpha_v_ = 0.999 * alpha_v_ + 0.001 * grad * grad;
        double mhat = alpha_m_ / (1.0 - std::pow(0.9, static_cast<double>(alpha_t_)));
        double vhat = alpha_v_ / (1.0 - std::pow(0.999, static_cast<double>(alpha_t_)));
        log_alpha_ -= cfg_.lr * mhat / (std::sqrt(vhat) + 1e-8);
    }

    soft_update_targets();

    stats.alpha = alpha();
    stats.r_bar = r_bar_;
    return stats;
}

std::vector<double> SacPpvAgent::importance_ratios(const Batch& batch) {
    // clip(pi(a|s) / b(a|s), 0, 2) under the current actor; values only, no
    // gradients, so a throwaway session suffices.
    size_t b = batch.size();
    TapeSession s;
    Var xs = s.input(batch.s);
    ActorHeads heads = actor_forward(s, xs);
    const Tensor& mu = s.tape.value(heads.mu);
    const Tensor& ls = s.tape.value(heads.log_sigma);
    std::vector<double> rho(b);
    for (size_t i = 0; i < b; ++i) {
        double logp = 0.0;
        for (int j = 0; j < kActionDim; ++j) {
            double a = std::clamp(batch.a.at(i, j), -1.0 + 1e-12, 1.0 - 1e-12);
            double u = std::atanh(a);
            double sigma = std::exp(ls.at(i, j));
            double z = (u - mu.at(i, j)) / sigma;
            logp += -0.5 * z * z - ls.at(i, j) - 0.91893853320467274178;
            logp -= std::log(1.0 - a * a + nn::kSquashEps);
        }
        rho[i] = std::clamp(std::exp(logp - batch.behavior_logp.data[i]), 0.0, 2.0);
    }
    return rho;
}

void SacPpvAgent::soft_update_targets() {
    nn::soft_update(critic1_, target1_, cfg_.tau);
    nn::soft_update(critic2_, target2_, cfg_.tau);
}

void SacPpvAgent::vrc_update(double mean_signed_td) {
    r_bar_ += cfg_.vrc_eta * cfg_.lr * mean_signed_td;  // rho fixed at 1
}

std::vector<std::pair<std::string, Tensor>> SacPpvAgent::snapshot() const {
    std::vector<std::pair<std::string, Tensor>> out;
    auto dump = [&](const char* prefix, const nn::ParamStore& store) {
        for (const auto& e : store.entries()) out.emplace_back(std::string(prefix) + "/" + e.name, e.value);
    };
    dump("actor", actor_);
    dump("critic1", critic1_);
    dump("critic2", critic2_);
    dump("target1", target1_);
    dump("target2", target2_);
    out.emplace_back("alpha/log_alpha", Tensor::scalar(log_alpha_));
    out.emplace_back("vrc/r_bar", Tensor::scalar(r_bar_));
    return out;
}

void SacPpvAgent::restore(const std::vector<std::pair<std::string, Tensor>>& tensors) {
    auto pick = [&](const std::string& prefix, nn::ParamStore& store) {
        for (auto& e : store.entries()) {
            std::string full = prefix + "/" + e.name;
            auto it = std::find_if(tensors.begin(), tensors.end(),
                                   [&](const auto& p) { return p.first == full; });
            if (it == tensors.end())
                throw std::runtime_error("checkpoint: missing tensor " + full);
            if (it->second.size() != e.value.size() || it->second.shape != e.value.shape)
                throw std::runtime_error("checkpoint: shape mismatch for tensor " + full);
            e.value = it->second;
        }
    };
    pick("actor", actor_);
    pick("critic1", critic1_);
    pick("critic2", critic2_);
    pick("target1", target1_);
    pick("target2", target2_);
    for (const auto& [name, t] : tensors) {
        if (name == "alpha/log_alpha") log_alpha_ = t.item();
        if (name == "vrc/r_bar") r_bar_ = t.item();
    }
}

void SacPpvAgent::save_checkpoint(const std::string& path) const {
    nn::save_tensors(path, snapshot());
}

void SacPpvAgent::load_checkpoint(const std::string& path) { restore(nn::load_tensors(path)); }

}  // namespace lwpt
