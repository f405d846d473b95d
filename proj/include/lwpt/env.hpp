#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lwpt/config.hpp"
#include "lwpt/core_models.hpp"
#include "lwpt/rng.hpp"

namespace lwpt {

// One batteryless sensor. total_generated_bits is bookkeeping for the
// conservation invariant (generated = collected + pending).
struct BlsNode {
    core::Vec3 position;  // z = 0
    double pending_bits = 0.0;
    double cumulative_collected_bits = 0.0;
    double total_generated_bits = 0.0;
};

struct WorldState {
    core::Vec3 uav_position;
    std::vector<BlsNode> sensors;
    int slot = 0;  // completed slots, in 0..T
    double cum_fair_data = 0.0;  // sum over slots of per-slot fair-data term
    double cum_energy = 0.0;
};

// Scaled physical action: displacement plus transmit power.
struct ActionCmd {
    double dx = 0.0, dy = 0.0;
    double p_tx = 0.0;
};

struct StepOutcome {
    std::vector<double> next_state_vector;
    double reward = 0.0;
    bool done = false;
    // per-slot diagnostics
    std::vector<double> volumes;  // D_{i,t} per sensor, bits
    double slot_bits = 0.0;
    double slot_energy = 0.0;
    double jain_slot = 0.0;
    bool boundary_violation = false;
    int n_eligible = 0;
};

// Episodic MDP: owns world state, data arrivals, OFDMA allocation,
// constraint enforcement, and the cumulative fairness-per-energy reward.
// Single-owner; mutate only through step(). One RNG stream per instance.
class Environment {
public:
    Environment(EnvConfig cfg, uint64_t seed);

    // Re-seeds sensor layout and zeroes all accumulators.
    std::vector<double> reset();

    // raw_action components in [-1,1]; affinely scaled to the action bounds.
    StepOutcome step(const std::array<double, 3>& raw_action);

    const WorldState& state() const { return state_; }
    const EnvConfig& config() const { return cfg_; }
    bool done() const { return state_.slot >= cfg_.t_slots; }

    static std::vector<double> observe(const WorldState& s, const EnvConfig& cfg);

    // Exposed for direct testing.
    static void generate_arrivals(WorldState& s, const ArrivalParams& arrivals, Rng& rng);
    static std::vector<int> eligible_sensors(const WorldState& s, const ActionCmd& action,
                                             const EnvConfig& cfg);
    static double compute_reward(const WorldState& s_after, bool violation, const EnvConfig& cfg);

    ActionCmd scale_action(const std::array<double, 3>& raw) const;

private:
    double link_gain(const BlsNode& sensor);  // expected or sampled mode
    EnvConfig cfg_;
    uint64_t seed_;
    uint64_t episode_ = 0;
    Rng rng_;
    WorldState state_;
};

}  // namespace lwpt
