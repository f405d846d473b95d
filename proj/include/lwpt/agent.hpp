#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lwpt/config.hpp"
#include "lwpt/nets.hpp"
#include "lwpt/param_store.hpp"
#include "lwpt/per_buffer.hpp"
#include "lwpt/rng.hpp"

namespace lwpt {

// Modified twin-critic target: centered reward plus discounted soft value.
inline double q_target(double r, double r_bar, double gamma, bool done, double qmin_next,
                       double logp_next, double alpha) {
    return (r - r_bar) + gamma * (done ? 0.0 : 1.0) * (qmin_next - alpha * logp_next);
}

// Soft actor-critic with parameter-free attention in the actor, prioritized
// replay weights, and value-based reward centering. With all three switches
// off the update math reduces to vanilla SAC.
class SacPpvAgent {
public:
    static constexpr int kActionDim = 3;

    SacPpvAgent(int state_dim, AgentConfig cfg, uint64_t init_seed);

    std::array<double, 3> act(const std::vector<double>& state, bool deterministic, Rng& rng,
                              double* log_prob = nullptr);

    struct Batch {
        nn::Tensor s, a, r, s_next, done, weights;
        nn::Tensor behavior_logp;  // used only in clipped-rho centering mode
        size_t size() const { return s.rows(); }
    };
    static Batch make_batch(const ReplayBuffer::Sample& sample);

    struct UpdateStats {
        double critic_loss = 0.0;
        double actor_loss = 0.0;
        double alpha = 0.0;
        double r_bar = 0.0;
        std::vector<double> td_abs;  // per transition, for priority refresh
    };

    // One full gradient step: critics, actor, temperature, VRC bookkeeping,
    // soft target update. Noise tensors are [B, 3]; exposing them keeps the
    // update reproducible and directly comparable against an external
    // reference implementation.
    UpdateStats update_batch(const Batch& batch, const nn::Tensor& eps_next,
                             const nn::Tensor& eps_cur);
    UpdateStats update(const Batch& batch, Rng& rng);

    void soft_update_targets();
    void vrc_update(double mean_signed_td);
    std::vector<double> importance_ratios(const Batch& batch);

    double alpha() const;
    double log_alpha() const { return log_alpha_; }
    double r_bar() const { return r_bar_; }
    void set_r_bar(double v) { r_bar_ = v; }

    struct ActorHeads {
        nn::Var mu;
        nn::Var log_sigma;  // clamped
    };
    ActorHeads actor_forward(nn::TapeSession& s, nn::Var x);
    nn::Var critic_forward(nn::TapeSession& s, nn::ParamStore& store, nn::Var state_action);

    nn::ParamStore& actor_params() { return actor_; }
    nn::ParamStore& critic1_params() { return critic1_; }
    nn::ParamStore& critic2_params() { return critic2_; }
    nn::ParamStore& target1_params() { return target1_; }
    nn::ParamStore& target2_params() { return target2_; }
    const AgentConfig& config() const { return cfg_; }
    int state_dim() const { return state_dim_; }

    // Checkpoint surface: every parameter tensor plus the temperature and
    // the reward-center scalar, names prefixed per network.
    std::vector<std::pair<std::string, nn::Tensor>> snapshot() const;
    void restore(const std::vector<std::pair<std::string, nn::Tensor>>& tensors);
    void save_checkpoint(const std::string& path) const;
    void load_checkpoint(const std::string& path);

private:
    int state_dim_;
    AgentConfig cfg_;
    nn::ParamStore actor_, critic1_, critic2_, target1_, target2_;
    double log_alpha_ = 0.0;
    double alpha_m_ = 0.0, alpha_v_ = 0.0;
    int64_t alpha_t_ = 0;
    double r_bar_ = 0.0;
};

}  // namespace lwpt
