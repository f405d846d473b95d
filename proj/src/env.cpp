#include "lwpt/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lwpt {

namespace {

// Candidate filter plus the two-pass equal-split fixed point. Gains are
// precomputed per sensor so expected and sampled channel modes share one
// code path.
std::vector<int> eligible_with_gains(const WorldState& s, const ActionCmd& action,
                                     const EnvConfig& cfg, const std::vector<double>& gains) {
    std::vector<int> candidates;
    std::vector<double> snr_rate_per_hz;  // log2(1+snr) per candidate
    for (size_t i = 0; i < s.sensors.size(); ++i) {
        const BlsNode& sn = s.sensors[i];
        if (sn.pending_bits <= 0.0) continue;
        double dist = core::distance(s.uav_position, sn.position);
        if (dist > cfg.d_max) continue;
        double p_rx = core::received_power(action.p_tx, dist, cfg.wpt, cfg.channel.alpha);
        double p_h = core::harvested_power(p_rx, cfg.wpt);
        if (p_h <= 0.0) continue;
        candidates.push_back(static_cast<int>(i));
        snr_rate_per_hz.push_back(std::log2(1.0 + p_h * gains[i] / cfg.channel.noise_power));
    }
    if (candidates.empty()) return {};

    // Pass 1: equal split over all candidates, drop sub-threshold links.
    double b1 = cfg.bandwidth_total / static_cast<double>(candidates.size());
    std::vector<int> survivors;
    for (size_t k = 0; k < candidates.size(); ++k)
        if (b1 * snr_rate_per_hz[k] >= cfg.r_th) survivors.push_back(candidates[k]);
    if (survivors.empty()) return {};

    // Pass 2: dropping members only raises per-member bandwidth, so the
    // survivors' rates can only improve; one recheck settles the fixed point.
    double b2 = cfg.bandwidth_total / static_cast<double>(survivors.size());
    std::vector<int> final_set;
    for (int idx : survivors) {
        double dist = core::distance(s.uav_position, s.sensors[idx].position);
        double p_rx = core::received_power(action.p_tx, dist, cfg.wpt, cfg.channel.alpha);
        double p_h = core::harvested_power(p_rx, cfg.wpt);
        if (core::achievable_rate(p_h, gains[idx], b2, cfg.channel) >= cfg.r_th)
            final_set.push_back(idx);
    }
    return final_set;
}

std::vector<double> expected_gains(const WorldState& s, const EnvConfig& cfg) {
    std::vector<double> gains(s.sensors.size());
    for (size_t i = 0; i < s.sensors.size(); ++i) {
        double dist = core::distance(s.uav_position, s.sensors[i].position);
        double theta = core::elevation_angle_deg(cfg.altitude, dist);
        gains[i] = core::expected_channel_gain(dist, theta, cfg.channel);
    }
    return gains;
}

}  // namespace

Environment::Environment(EnvConfig cfg, uint64_t seed)
    : cfg_(std::move(cfg)), seed_(seed), rng_(seed) {
    cfg_.validate();
    reset();
}

std::vector<double> Environment::reset() {
    // Sensor layout is a pure function of the seed; the dynamics stream
    // (arrivals, sampled fading) advances per episode so repeated resets
    // replay the same map under fresh randomness.
    Rng layout(seed_);
    state_ = WorldState{};
    state_.uav_position = {cfg_.uav_start_x, cfg_.uav_start_y, cfg_.altitude};
    state_.sensors.resize(cfg_.n_sensors);
    for (BlsNode& sn : state_.sensors) {
        sn.position = {layout.uniform(cfg_.x_min, cfg_.x_max),
                       layout.uniform(cfg_.y_min, cfg_.y_max), 0.0};
    }
    rng_ = Rng(seed_ ^ (0x9E3779B97F4A7C15ull * (episode_ + 1)));
    episode_ += 1;
    return observe(state_, cfg_);
}

ActionCmd Environment::scale_action(const std::array<double, 3>& raw) const {
    auto clip = [](double v) { return std::clamp(v, -1.0, 1.0); };
    ActionCmd cmd;
    cmd.dx = clip(raw[0]) * cfg_.move_max_x;
    cmd.dy = clip(raw[1]) * cfg_.move_max_y;
    cmd.p_tx = cfg_.p_tx_min + (clip(raw[2]) + 1.0) * 0.5 * (cfg_.p_tx_max - cfg_.p_tx_min);
    return cmd;
}

void Environment::generate_arrivals(WorldState& s, const ArrivalParams& arrivals, Rng& rng) {
    for (BlsNode& sn : s.sensors) {
        if (!rng.bernoulli(arrivals.p_gen)) continue;
        double bits = std::max(0.0, rng.normal(arrivals.mean_bits, arrivals.std_bits));
        sn.pending_bits += bits;
        sn.total_generated_bits += bits;
    }
}

std::vector<int> Environment::eligible_sensors(const WorldState& s, const ActionCmd& action,
                                               const EnvConfig& cfg) {
    return eligible_with_gains(s, action, cfg, expected_gains(s, cfg));
}

double Environment::compute_reward(const WorldState& s_after, bool violation, const EnvConfig& cfg) {
    double numerator;
    if (cfg.fairness_scope == FairnessScope::Slot) {
        numerator = s_after.cum_fair_data;
    } else {
        std::vector<double> totals(s_after.sensors.size());
        for (size_t i = 0; i < s_after.sensors.size(); ++i)
            totals[i] = s_after.sensors[i].cumulative_collected_bits;
        numerator = core::fair_data_term(totals, totals.size());
    }
    double ratio = s_after.cum_energy > 0.0 ? cfg.xi * numerator / s_after.cum_energy : 0.0;
    return ratio - (violation ? cfg.boundary_penalty : 0.0);
}

std::vector<double> Environment::observe(const WorldState& s, const EnvConfig& cfg) {
    std::vector<double> obs;
    obs.reserve(2 + 2 * s.sensors.size());
    double wx = cfg.x_max - cfg.x_min;
    double wy = cfg.y_max - cfg.y_min;
    obs.push_back((s.uav_position.x - cfg.x_min) / wx);
    obs.push_back((s.uav_position.y - cfg.y_min) / wy);
    for (const BlsNode& sn : s.sensors) {
        obs.push_back((sn.position.x - cfg.x_min) / wx);
        obs.push_back((sn.position.y - cfg.y_min) / wy);
    }
    return obs;
}

double Environment::link_gain(const BlsNode& sensor) {
    double dist = core::distance(state_.uav_position, sensor.position);
    double theta = core::elevation_angle_deg(cfg_.altitude, dist);
    if (cfg_.channel_mode == ChannelMode::Expected)
        return core::expected_channel_gain(dist, theta, cfg_.channel);
    double p_los = core::los_probability(theta, cfg_.channel);
    double base = cfg_.channel.beta0 * std::pow(dist, -cfg_.channel.alpha);
    double large = rng_.bernoulli(p_los) ? base : cfg_.channel.kappa * base;
    return large * rng_.exponential(1.0);  // unit-mean small-scale power factor
}

StepOutcome Environment::step(const std::array<double, 3>& raw_action) {
    if (done()) throw std::logic_error("Environment::step called after episode end");

    ActionCmd cmd = scale_action(raw_action);

    // Tentative move, clamp to the operating rectangle (C1, C2).
    core::Vec3 before = state_.uav_position;
    core::Vec3 tentative = core::update_position(before, {cmd.dx, cmd.dy, 0.0});
    core::Vec3 clamped = tentative;
    clamped.x = std::clamp(clamped.x, cfg_.x_min, cfg_.x_max);
    clamped.y = std::clamp(clamped.y, cfg_.y_min, cfg_.y_max);
    bool violation = clamped.x != tentative.x || clamped.y != tentative.y;
    state_.uav_position = clamped;

    generate_arrivals(state_, cfg_.arrivals, rng_);

    // Channel gains per sensor for this slot (draws consumed only in
    // sampled mode).
    std::vector<double> gains(state_.sensors.size());
    for (size_t i = 0; i < state_.sensors.size(); ++i) gains[i] = link_gain(state_.sensors[i]);

    std::vector<int> eligible = eligible_with_gains(state_, cmd, cfg_, gains);

    StepOutcome out;
    out.volumes.assign(state_.sensors.size(), 0.0);
    out.n_eligible = static_cast<int>(eligible.size());
    if (!eligible.empty()) {
        double band = cfg_.bandwidth_total / static_cast<double>(eligible.size());
        for (int idx : eligible) {
            BlsNode& sn = state_.sensors[idx];
            double dist = core::distance(state_.uav_position, sn.position);
            double p_rx = core::received_power(cmd.p_tx, dist, cfg_.wpt, cfg_.channel.alpha);
            double p_h = core::harvested_power(p_rx, cfg_.wpt);
            double rate = core::achievable_rate(p_h, gains[idx], band, cfg_.channel);
            double d = std::min(core::data_volume(rate, cfg_.t_d), sn.pending_bits);
            sn.pending_bits -= d;
            sn.cumulative_collected_bits += d;
            out.volumes[idx] = d;
            out.slot_bits += d;
        }
    }

    // Energy: transmit over the full slot plus propulsion at the realized
    // (post-clamp) speed.
    double dx_real = state_.uav_position.x - before.x;
    double dy_real = state_.uav_position.y - before.y;
    double speed = std::sqrt(dx_real * dx_real + dy_real * dy_real) / cfg_.t_d;
    out.slot_energy = core::slot_energy(cmd.p_tx * cfg_.t_d,
                                        core::propulsion_energy(speed, cfg_.t_d, cfg_.rotor));
    state_.cum_energy += out.slot_energy;

    out.jain_slot = core::jain_index(out.volumes, out.volumes.size());
    state_.cum_fair_data += core::fair_data_term(out.volumes, out.volumes.size());

    out.boundary_violation = violation;
    out.reward = compute_reward(state_, violation, cfg_);

    state_.slot += 1;
    out.done = done();
    out.next_state_vector = observe(state_, cfg_);
    return out;
}

}  // namespace lwpt
