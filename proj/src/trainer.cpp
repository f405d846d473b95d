#include "lwpt/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace lwpt {

namespace {

// Derived, non-overlapping RNG streams per role.
constexpr uint64_t kActionStream = 0xA5A5A5A5A5A5A5A5ull;
constexpr uint64_t kSampleStream = 0x5A5A5A5A5A5A5A5Aull;
constexpr uint64_t kNoiseStream = 0xC3C3C3C3C3C3C3C3ull;

struct EpisodeAccum {
    double ret = 0.0;
    double jain_sum = 0.0;
    int violations = 0;
    int slots = 0;

    void add(const StepOutcome& out) {
        ret += out.reward;
        jain_sum += out.jain_slot;
        violations += out.boundary_violation ? 1 : 0;
        slots += 1;
    }

    EpisodeRecord finish(int episode, const Environment& env, double wall_s) const {
        EpisodeRecord rec;
        rec.episode = episode;
        rec.ret = ret;
        rec.fair_data_slot_bits = env.state().cum_fair_data;
        std::vector<double> totals;
        for (const BlsNode& sn : env.state().sensors) totals.push_back(sn.cumulative_collected_bits);
        rec.fair_data_cum_bits = core::fair_data_term(totals, totals.size());
        rec.energy_j = env.state().cum_energy;
        rec.jain_mean = slots > 0 ? jain_sum / slots : 0.0;
        rec.violations = violations;
        rec.wall_time_s = wall_s;
        return rec;
    }
};

}  // namespace

Policy random_policy() {
    return [](const Environment&, const std::vector<double>&, Rng& rng) {
        return std::array<double, 3>{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                     rng.uniform(-1.0, 1.0)};
    };
}

std::array<double, 3> greedy_action(const WorldState& state, const EnvConfig& cfg) {
    // Nearest sensor with pending data; full-throttle toward it, transmit at
    // P_max whenever a pending sensor is inside the coverage threshold.
    const BlsNode* nearest = nullptr;
    double best = 0.0;
    bool pending_in_range = false;
    for (const BlsNode& sn : state.sensors) {
        if (sn.pending_bits <= 0.0) continue;
        double d = core::distance(state.uav_position, sn.position);
        if (!nearest || d < best) {
            nearest = &sn;
            best = d;
        }
        if (d <= cfg.d_max) pending_in_range = true;
    }
    if (!nearest) return {0.0, 0.0, -1.0};  // idle at P_min
    double dx = std::clamp(nearest->position.x - state.uav_position.x, -cfg.move_max_x, cfg.move_max_x);
    double dy = std::clamp(nearest->position.y - state.uav_position.y, -cfg.move_max_y, cfg.move_max_y);
    double p_raw = pending_in_range ? 1.0 : -1.0;
    return {dx / cfg.move_max_x, dy / cfg.move_max_y, p_raw};
}

Policy greedy_policy() {
    return [](const Environment& env, const std::vector<double>&, Rng&) {
        return greedy_action(env.state(), env.config());
    };
}

Policy agent_policy(SacPpvAgent& agent, bool deterministic) {
    return [&agent, deterministic](const Environment&, const std::vector<double>& obs, Rng& rng) {
        return agent.act(obs, deterministic, rng);
    };
}

std::vector<EpisodeRecord> train_agent(SacPpvAgent& agent, const EnvConfig& env_cfg, int episodes,
                                       uint64_t seed,
                                       const std::function<void(const EpisodeRecord&)>& on_episode) {
    const AgentConfig& acfg = agent.config();
    Environment env(env_cfg, seed);
    Rng action_rng(seed ^ kActionStream);
    Rng sample_rng(seed ^ kSampleStream);
    Rng noise_rng(seed ^ kNoiseStream);
    ReplayBuffer buffer(acfg.buffer_capacity, acfg.alpha_per, acfg.eps_prior);

    std::vector<EpisodeRecord> records;
    records.reserve(episodes);
    int64_t total_steps = 0;
    const int64_t planned = static_cast<int64_t>(episodes) * env_cfg.t_slots;

    for (int ep = 0; ep < episodes; ++ep) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<double> obs = env.reset();
        EpisodeAccum acc;
        while (!env.done()) {
            std::array<double, 3> raw;
            double behavior_logp = -std::log(8.0);  // uniform density over [-1,1]^3
            if (total_steps < acfg.warmup_steps) {
                raw = {action_rng.uniform(-1.0, 1.0), action_rng.uniform(-1.0, 1.0),
                       action_rng.uniform(-1.0, 1.0)};
            } else {
                raw = agent.act(obs, false, action_rng, &behavior_logp);
            }
            StepOutcome out = env.step(raw);
            buffer.push(Transition{obs, {raw[0], raw[1], raw[2]}, out.reward,
                                   out.next_state_vector, out.done, behavior_logp});
            obs = out.next_state_vector;
            acc.add(out);
            total_steps += 1;

            if (total_steps >= acfg.warmup_steps &&
                buffer.size() >= static_cast<size_t>(acfg.batch_size)) {
                double frac = planned > 0 ? std::min(1.0, static_cast<double>(total_steps) /
                                                              static_cast<double>(planned))
                                          : 1.0;
                double beta = acfg.beta_per_start + (acfg.beta_per_end - acfg.beta_per_start) * frac;
                ReplayBuffer::Sample s = acfg.use_per
                                             ? buffer.sample(acfg.batch_size, beta, sample_rng)
                                             : buffer.sample_uniform(acfg.batch_size, sample_rng);
                SacPpvAgent::Batch batch = SacPpvAgent::make_batch(s);
                SacPpvAgent::UpdateStats stats = agent.update(batch, noise_rng);
                buffer.update_priorities(s.indices, stats.td_abs);
            }
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        EpisodeRecord rec = acc.finish(ep, env, wall);
        if (on_episode) on_episode(rec);
        records.push_back(rec);
    }
    return records;
}

std::vector<EpisodeRecord> run_policy(const Policy& policy, const EnvConfig& env_cfg, int episodes,
                                      uint64_t seed,
                                      const std::function<void(const EpisodeRecord&)>& on_episode) {
    Environment env(env_cfg, seed);
    Rng action_rng(seed ^ kActionStream);
    std::vector<EpisodeRecord> records;
    records.reserve(episodes);
    for (int ep = 0; ep < episodes; ++ep) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<double> obs = env.reset();
        EpisodeAccum acc;
        while (!env.done()) {
            StepOutcome out = env.step(policy(env, obs, action_rng));
            obs = out.next_state_vector;
            acc.add(out);
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        EpisodeRecord rec = acc.finish(ep, env, wall);
        if (on_episode) on_episode(rec);
        records.push_back(rec);
    }
    return records;
}

std::vector<TraceRow> rollout_trace(const Policy& policy, const EnvConfig& env_cfg, uint64_t seed) {
    Environment env(env_cfg, seed);
    Rng action_rng(seed ^ kActionStream);
    std::vector<double> obs = env.reset();
    std::vector<TraceRow> rows;
    int t = 1;
    while (!env.done()) {
        std::array<double, 3> raw = policy(env, obs, action_rng);
        ActionCmd cmd = env.scale_action(raw);
        StepOutcome out = env.step(raw);
        TraceRow row;
        row.t = t++;
        row.x = env.state().uav_position.x;
        row.y = env.state().uav_position.y;
        row.p_tx = cmd.p_tx;
        row.n_eligible = out.n_eligible;
        row.slot_bits = out.slot_bits;
        row.slot_energy_j = out.slot_energy;
        row.reward = out.reward;
        rows.push_back(row);
        obs = out.next_state_vector;
    }
    return rows;
}

}  // namespace lwpt
