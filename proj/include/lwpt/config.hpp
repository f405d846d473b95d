#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwpt/core_models.hpp"

#include <json.hpp>

namespace lwpt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ChannelMode { Expected, Sampled };
enum class FairnessScope { Slot, Cumulative };

struct ArrivalParams {
    double p_gen = 0.1;      // Bernoulli probability per sensor per slot
    double mean_bits = 1e6;  // normal mean of a new data burst
    double std_bits = 2e5;   // normal std, draws truncated at 0
};

// Full simulation parameterization; single source of truth, echoed with
// every run.
struct EnvConfig {
    // Geometry
    double x_min = 0.0, x_max = 400.0;
    double y_min = 0.0, y_max = 400.0;
    double uav_start_x = 100.0, uav_start_y = 100.0;
    double altitude = 50.0;
    int n_sensors = 20;

    // Episode structure
    int t_slots = 200;
    double t_d = 1.0;

    // Action bounds
    double move_max_x = 20.0, move_max_y = 20.0;
    double p_tx_min = 0.0, p_tx_max = 10.0;

    // Link budget
    double d_max = 150.0;
    double r_th = 1e5;
    double bandwidth_total = 2e7;

    // Reward
    double xi = 1e-6;
    double boundary_penalty = 1.0;

    core::ChannelParams channel;
    core::WptParams wpt;
    core::RotorParams rotor;
    ArrivalParams arrivals;

    ChannelMode channel_mode = ChannelMode::Expected;
    FairnessScope fairness_scope = FairnessScope::Slot;

    int state_dim() const { return 2 + 2 * n_sensors; }

    void validate() const;
};

// Learner hyperparameters plus the three enhancement switches.
struct AgentConfig {
    std::vector<int> hidden{256, 256};
    double lr = 3e-4;
    double gamma = 0.99;
    double tau = 0.005;
    int batch_size = 256;
    size_t buffer_capacity = 1000000;
    int warmup_steps = 1000;

    double alpha_per = 0.6;
    double beta_per_start = 0.4;
    double beta_per_end = 1.0;
    double eps_prior = 1e-6;

    double vrc_eta = 0.01;
    bool vrc_clipped_rho = false;  // weight centering by clip(pi/b, 0, 2) instead of rho=1
    double pfam_omega = 1e-4;
    double target_entropy = -3.0;
    double init_alpha = 0.2;

    bool use_pfam = true;
    bool use_per = true;
    bool use_vrc = true;

    void validate() const;
};

struct RunConfig {
    EnvConfig env;
    AgentConfig agent;
    std::vector<uint64_t> seeds{1};
    int episodes = 300;
    std::string out_dir = "runs/out";
    std::string algorithm = "sacppv";  // sacppv | sac | random | greedy

    void validate() const;
};

nlohmann::json to_json(const EnvConfig&);
nlohmann::json to_json(const AgentConfig&);
nlohmann::json to_json(const RunConfig&);

EnvConfig env_config_from_json(const nlohmann::json&);
AgentConfig agent_config_from_json(const nlohmann::json&);
RunConfig run_config_from_json(const nlohmann::json&);

RunConfig load_run_config(const std::string& path);

// Stable FNV-1a hash of the canonical (fully materialized) JSON echo.
uint64_t config_hash(const RunConfig&);

}  // namespace lwpt
