#include "lwpt/config.hpp"

#include <fstream>

namespace lwpt {

using nlohmann::json;

namespace {

// Fetch with a path-qualified error so the CLI can point at the bad field.
template <typename T>
void get_opt(const json& j, const std::string& key, T& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
}

// Reject unknown keys: a silently ignored key means the run is not using the
// configuration the user thinks it is.
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw ConfigError(path + "." + item.key() + ": unknown key");
    }
}

}  // namespace

void EnvConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("env." + m); };
    if (x_min >= x_max || y_min >= y_max) fail("area: empty operating rectangle");
    if (uav_start_x < x_min || uav_start_x > x_max || uav_start_y < y_min || uav_start_y > y_max)
        fail("uav_start: outside operating rectangle");
    if (altitude <= 0) fail("altitude: must be > 0");
    if (n_sensors < 1) fail("n_sensors: must be >= 1");
    if (t_slots < 1) fail("t_slots: must be >= 1");
    if (t_d <= 0) fail("t_d: must be > 0");
    if (move_max_x <= 0 || move_max_y <= 0) fail("move_max: must be > 0");
    if (p_tx_min < 0 || p_tx_max < p_tx_min) fail("p_tx: need 0 <= p_tx_min <= p_tx_max");
    if (d_max <= 0) fail("d_max: must be > 0");
    if (r_th < 0) fail("r_th: must be >= 0");
    if (bandwidth_total <= 0) fail("bandwidth_total: must be > 0");
    if (boundary_penalty < 0) fail("boundary_penalty: must be >= 0");
    if (xi <= 0) fail("xi: must be > 0");
    if (channel.alpha <= 0 || channel.beta0 <= 0 || channel.noise_power <= 0) fail("channel: invalid");
    if (channel.kappa <= 0 || channel.kappa > 1) fail("channel.kappa: must be in (0,1]");
    if (wpt.p_min_rx <= 0 || wpt.p_max_rx <= wpt.p_min_rx) fail("wpt: need 0 < p_min_rx < p_max_rx");
    if (rotor.p0 <= 0 || rotor.pm <= 0 || rotor.u_tip <= 0 || rotor.v_ind <= 0 || rotor.d0 <= 0 ||
        rotor.rho0 <= 0 || rotor.s0 <= 0 || rotor.disc_area <= 0)
        fail("rotor: all fields must be > 0");
    if (arrivals.p_gen < 0 || arrivals.p_gen > 1) fail("arrivals.p_gen: must be in [0,1]");
    if (arrivals.mean_bits <= 0 || arrivals.std_bits < 0) fail("arrivals: invalid normal parameters");
    // eta must stay in (0,1] over the active interval
    for (int k = 0; k <= 64; ++k) {
        double p = wpt.p_min_rx + (wpt.p_max_rx - wpt.p_min_rx) * k / 64.0;
        double eta = core::eta_eval(wpt.eta_coeffs, p);
        if (!(eta > 0.0) || eta > 1.0) fail("wpt.eta_coeffs: eta leaves (0,1] on [p_min_rx, p_max_rx]");
    }
}

void AgentConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("agent." + m); };
    if (hidden.empty()) fail("hidden: need at least one hidden layer");
    for (int h : hidden)
        if (h < 2) fail("hidden: layer width must be >= 2");
    if (lr <= 0) fail("lr: must be > 0");
    if (gamma < 0 || gamma >= 1) fail("gamma: must be in [0,1)");
    if (tau <= 0 || tau > 1) fail("tau: must be in (0,1]");
    if (batch_size < 1) fail("batch_size: must be >= 1");
    if (buffer_capacity < static_cast<size_t>(batch_size)) fail("buffer_capacity: smaller than batch");
    if (warmup_steps < 0) fail("warmup_steps: must be >= 0");
    if (alpha_per < 0) fail("alpha_per: must be >= 0");
    if (beta_per_start < 0 || beta_per_end < beta_per_start) fail("beta_per: bad anneal range");
    if (eps_prior <= 0) fail("eps_prior: must be > 0");
    if (vrc_eta < 0) fail("vrc_eta: must be >= 0");
    if (pfam_omega <= 0) fail("pfam_omega: must be > 0");
    if (init_alpha <= 0) fail("init_alpha: must be > 0");
}

void RunConfig::validate() const {
    env.validate();
    agent.validate();
    if (seeds.empty()) throw ConfigError("seeds: need at least one seed");
    if (episodes < 0) throw ConfigError("episodes: must be >= 0");
    if (out_dir.empty()) throw ConfigError("out_dir: required");
    if (algorithm != "sacppv" && algorithm != "sac" && algorithm != "random" && algorithm != "greedy")
        throw ConfigError("algorithm: must be one of sacppv|sac|random|greedy");
}

json to_json(const EnvConfig& c) {
    json j;
    j["area"] = {{"x_min", c.x_min}, {"x_max", c.x_max}, {"y_min", c.y_min}, {"y_max", c.y_max}};
    j["uav_start"] = {{"x", c.uav_start_x}, {"y", c.uav_start_y}};
    j["altitude"] = c.altitude;
    j["n_sensors"] = c.n_sensors;
    j["t_slots"] = c.t_slots;
    j["t_d"] = c.t_d;
    j["move_max_x"] = c.move_max_x;
    j["move_max_y"] = c.move_max_y;
    j["p_tx_min"] = c.p_tx_min;
    j["p_tx_max"] = c.p_tx_max;
    j["d_max"] = c.d_max;
    j["r_th"] = c.r_th;
    j["bandwidth_total"] = c.bandwidth_total;
    j["xi"] = c.xi;
    j["boundary_penalty"] = c.boundary_penalty;
    j["channel"] = {{"beta0", c.channel.beta0},   {"alpha", c.channel.alpha},
                    {"kappa", c.channel.kappa},   {"c_env", c.channel.c_env},
                    {"d_env", c.channel.d_env},   {"noise_power", c.channel.noise_power}};
    j["wpt"] = {{"g_t", c.wpt.g_t},           {"g_r", c.wpt.g_r},
                {"wavelength", c.wpt.wavelength}, {"p_min_rx", c.wpt.p_min_rx},
                {"p_max_rx", c.wpt.p_max_rx}, {"eta_coeffs", c.wpt.eta_coeffs}};
    j["rotor"] = {{"p0", c.rotor.p0},   {"pm", c.rotor.pm},     {"u_tip", c.rotor.u_tip},
                  {"v_ind", c.rotor.v_ind}, {"d0", c.rotor.d0}, {"rho0", c.rotor.rho0},
                  {"s0", c.rotor.s0},   {"disc_area", c.rotor.disc_area}};
    j["arrivals"] = {{"p_gen", c.arrivals.p_gen},
                     {"mean_bits", c.arrivals.mean_bits},
                     {"std_bits", c.arrivals.std_bits}};
    j["channel_mode"] = c.channel_mode == ChannelMode::Expected ? "expected" : "sampled";
    j["fairness_scope"] = c.fairness_scope == FairnessScope::Slot ? "slot" : "cumulative";
    return j;
}

json to_json(const AgentConfig& c) {
    json j;
    j["hidden"] = c.hidden;
    j["lr"] = c.lr;
    j["gamma"] = c.gamma;
    j["tau"] = c.tau;
    j["batch_size"] = c.batch_size;
    j["buffer_capacity"] = c.buffer_capacity;
    j["warmup_steps"] = c.warmup_steps;
    j["alpha_per"] = c.alpha_per;
    j["beta_per_start"] = c.beta_per_start;
    j["beta_per_end"] = c.beta_per_end;
    j["eps_prior"] = c.eps_prior;
    j["vrc_eta"] = c.vrc_eta;
    j["vrc_clipped_rho"] = c.vrc_clipped_rho;
    j["pfam_omega"] = c.pfam_omega;
    j["target_entropy"] = c.target_entropy;
    j["init_alpha"] = c.init_alpha;
    j["use_pfam"] = c.use_pfam;
    j["use_per"] = c.use_per;
    j["use_vrc"] = c.use_vrc;
    return j;
}

json to_json(const RunConfig& c) {
    json j;
    j["env"] = to_json(c.env);
    j["agent"] = to_json(c.agent);
    j["seeds"] = c.seeds;
    j["episodes"] = c.episodes;
    j["out_dir"] = c.out_dir;
    j["algorithm"] = c.algorithm;
    return j;
}

EnvConfig env_config_from_json(const json& j) {
    EnvConfig c;
    check_keys(j,
               {"area", "uav_start", "altitude", "n_sensors", "t_slots", "t_d", "move_max_x",
                "move_max_y", "p_tx_min", "p_tx_max", "d_max", "r_th", "bandwidth_total", "xi",
                "boundary_penalty", "channel", "wpt", "rotor", "arrivals", "channel_mode",
                "fairness_scope"},
               "env");
    if (j.contains("area")) {
        const json& a = j.at("area");
        check_keys(a, {"x_min", "x_max", "y_min", "y_max"}, "env.area");
        get_opt(a, "x_min", c.x_min, "env.area");
        get_opt(a, "x_max", c.x_max, "env.area");
        get_opt(a, "y_min", c.y_min, "env.area");
        get_opt(a, "y_max", c.y_max, "env.area");
    }
    if (j.contains("uav_start")) {
        const json& u = j.at("uav_start");
        check_keys(u, {"x", "y"}, "env.uav_start");
        get_opt(u, "x", c.uav_start_x, "env.uav_start");
        get_opt(u, "y", c.uav_start_y, "env.uav_start");
    }
    get_opt(j, "altitude", c.altitude, "env");
    get_opt(j, "n_sensors", c.n_sensors, "env");
    get_opt(j, "t_slots", c.t_slots, "env");
    get_opt(j, "t_d", c.t_d, "env");
    get_opt(j, "move_max_x", c.move_max_x, "env");
    get_opt(j, "move_max_y", c.move_max_y, "env");
    get_opt(j, "p_tx_min", c.p_tx_min, "env");
    get_opt(j, "p_tx_max", c.p_tx_max, "env");
    get_opt(j, "d_max", c.d_max, "env");
    get_opt(j, "r_th", c.r_th, "env");
    get_opt(j, "bandwidth_total", c.bandwidth_total, "env");
    get_opt(j, "xi", c.xi, "env");
    get_opt(j, "boundary_penalty", c.boundary_penalty, "env");
    if (j.contains("channel")) {
        const json& ch = j.at("channel");
        check_keys(ch, {"beta0", "alpha", "kappa", "c_env", "d_env", "noise_power"},
                   "env.channel");
        get_opt(ch, "beta0", c.channel.beta0, "env.channel");
        get_opt(ch, "alpha", c.channel.alpha, "env.channel");
        get_opt(ch, "kappa", c.channel.kappa, "env.channel");
        get_opt(ch, "c_env", c.channel.c_env, "env.channel");
        get_opt(ch, "d_env", c.channel.d_env, "env.channel");
        get_opt(ch, "noise_power", c.channel.noise_power, "env.channel");
    }
    if (j.contains("wpt")) {
        const json& w = j.at("wpt");
        check_keys(w, {"g_t", "g_r", "wavelength", "p_min_rx", "p_max_rx", "eta_coeffs"},
                   "env.wpt");
        get_opt(w, "g_t", c.wpt.g_t, "env.wpt");
        get_opt(w, "g_r", c.wpt.g_r, "env.wpt");
        get_opt(w, "wavelength", c.wpt.wavelength, "env.wpt");
        get_opt(w, "p_min_rx", c.wpt.p_min_rx, "env.wpt");
        get_opt(w, "p_max_rx", c.wpt.p_max_rx, "env.wpt");
        get_opt(w, "eta_coeffs", c.wpt.eta_coeffs, "env.wpt");
    }
    if (j.contains("rotor")) {
        const json& r = j.at("rotor");
        check_keys(r, {"p0", "pm", "u_tip", "v_ind", "d0", "rho0", "s0", "disc_area"},
                   "env.rotor");
        get_opt(r, "p0", c.rotor.p0, "env.rotor");
        get_opt(r, "pm", c.rotor.pm, "env.rotor");
        get_opt(r, "u_tip", c.rotor.u_tip, "env.rotor");
        get_opt(r, "v_ind", c.rotor.v_ind, "env.rotor");
        get_opt(r, "d0", c.rotor.d0, "env.rotor");
        get_opt(r, "rho0", c.rotor.rho0, "env.rotor");
        get_opt(r, "s0", c.rotor.s0, "env.rotor");
        get_opt(r, "disc_area", c.rotor.disc_area, "env.rotor");
    }
    if (j.contains("arrivals")) {
        const json& a = j.at("arrivals");
        check_keys(a, {"p_gen", "mean_bits", "std_bits"}, "env.arrivals");
        get_opt(a, "p_gen", c.arrivals.p_gen, "env.arrivals");
        get_opt(a, "mean_bits", c.arrivals.mean_bits, "env.arrivals");
        get_opt(a, "std_bits", c.arrivals.std_bits, "env.arrivals");
    }
    if (j.contains("channel_mode")) {
        std::string m = j.at("channel_mode").get<std::string>();
        if (m == "expected") c.channel_mode = ChannelMode::Expected;
        else if (m == "sampled") c.channel_mode = ChannelMode::Sampled;
        else throw ConfigError("env.channel_mode: must be expected|sampled");
    }
    if (j.contains("fairness_scope")) {
        std::string m = j.at("fairness_scope").get<std::string>();
        if (m == "slot") c.fairness_scope = FairnessScope::Slot;
        else if (m == "cumulative") c.fairness_scope = FairnessScope::Cumulative;
        else throw ConfigError("env.fairness_scope: must be slot|cumulative");
    }
    return c;
}

AgentConfig agent_config_from_json(const json& j) {
    AgentConfig c;
    check_keys(j,
               {"hidden", "lr", "gamma", "tau", "batch_size", "buffer_capacity", "warmup_steps",
                "alpha_per", "beta_per_start", "beta_per_end", "eps_prior", "vrc_eta",
                "vrc_clipped_rho", "pfam_omega", "target_entropy", "init_alpha", "use_pfam",
                "use_per", "use_vrc"},
               "agent");
    get_opt(j, "hidden", c.hidden, "agent");
    get_opt(j, "lr", c.lr, "agent");
    get_opt(j, "gamma", c.gamma, "agent");
    get_opt(j, "tau", c.tau, "agent");
    get_opt(j, "batch_size", c.batch_size, "agent");
    get_opt(j, "buffer_capacity", c.buffer_capacity, "agent");
    get_opt(j, "warmup_steps", c.warmup_steps, "agent");
    get_opt(j, "alpha_per", c.alpha_per, "agent");
    get_opt(j, "beta_per_start", c.beta_per_start, "agent");
    get_opt(j, "beta_per_end", c.beta_per_end, "agent");
    get_opt(j, "eps_prior", c.eps_prior, "agent");
    get_opt(j, "vrc_eta", c.vrc_eta, "agent");
    get_opt(j, "vrc_clipped_rho", c.vrc_clipped_rho, "agent");
    get_opt(j, "pfam_omega", c.pfam_omega, "agent");
    get_opt(j, "target_entropy", c.target_entropy, "agent");
    get_opt(j, "init_alpha", c.init_alpha, "agent");
    get_opt(j, "use_pfam", c.use_pfam, "agent");
    get_opt(j, "use_per", c.use_per, "agent");
    get_opt(j, "use_vrc", c.use_vrc, "agent");
    return c;
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    check_keys(j, {"env", "agent", "seeds", "episodes", "out_dir", "algorithm"}, "run");
    if (j.contains("env")) c.env = env_config_from_json(j.at("env"));
    if (j.contains("agent")) c.agent = agent_config_from_json(j.at("agent"));
    get_opt(j, "seeds", c.seeds, "run");
    get_opt(j, "episodes", c.episodes, "run");
    get_opt(j, "out_dir", c.out_dir, "run");
    get_opt(j, "algorithm", c.algorithm, "run");
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return run_config_from_json(j);
}

uint64_t config_hash(const RunConfig& c) {
    std::string s = to_json(c).dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace lwpt
