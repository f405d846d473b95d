#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lwpt/agent.hpp"
#include "lwpt/config.hpp"
#include "lwpt/env.hpp"

namespace lwpt {

struct EpisodeRecord {
    int episode = 0;
    double ret = 0.0;
    double fair_data_slot_bits = 0.0;  // sum over slots of per-slot fair-data term
    double fair_data_cum_bits = 0.0;   // fair-data term over per-sensor cumulative totals
    double energy_j = 0.0;
    double jain_mean = 0.0;
    int violations = 0;
    double wall_time_s = 0.0;
};

struct TraceRow {
    int t = 0;
    double x = 0.0, y = 0.0;
    double p_tx = 0.0;
    int n_eligible = 0;
    double slot_bits = 0.0;
    double slot_energy_j = 0.0;
    double reward = 0.0;
};

// A policy maps the current environment (full state access, baselines need
// it) and observation to a raw action in [-1,1]^3.
using Policy = std::function<std::array<double, 3>(const Environment&, const std::vector<double>&, Rng&)>;

Policy random_policy();
Policy greedy_policy();

// Nearest-pending-sensor heuristic exposed directly for unit tests.
std::array<double, 3> greedy_action(const WorldState& state, const EnvConfig& cfg);

// Runs Algorithm-1-style training: stochastic acting (uniform random during
// warmup), PER push, one gradient update per step once warm, priority
// refresh. Deterministic given (configs, seed).
std::vector<EpisodeRecord> train_agent(SacPpvAgent& agent, const EnvConfig& env_cfg, int episodes,
                                       uint64_t seed,
                                       const std::function<void(const EpisodeRecord&)>& on_episode = {});

// Rolls out a fixed policy (no learning); used for baselines and evaluation.
std::vector<EpisodeRecord> run_policy(const Policy& policy, const EnvConfig& env_cfg, int episodes,
                                      uint64_t seed,
                                      const std::function<void(const EpisodeRecord&)>& on_episode = {});

// One episode with per-slot trace capture (deterministic policy expected).
std::vector<TraceRow> rollout_trace(const Policy& policy, const EnvConfig& env_cfg, uint64_t seed);

// Deterministic-mode policy wrapper around a trained agent.
Policy agent_policy(SacPpvAgent& agent, bool deterministic);

}  // namespace lwpt
