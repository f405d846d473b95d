#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Pure physical/objective formulas: Friis power transfer, rectenna
// harvesting, probabilistic-LoS air-to-ground channel, OFDMA rate,
// rotary-wing propulsion energy, and the Jain-fairness objective terms.
// Everything here is stateless and reentrant.

namespace lwpt::core {

struct ChannelParams {
    double beta0 = 1e-3;        // reference path loss at 1 m, linear
    double alpha = 2.6;         // path-loss exponent
    double kappa = 0.2;         // NLoS extra attenuation, in (0,1]
    double c_env = 10.0;        // logistic LoS coefficient C
    double d_env = 0.6;         // logistic LoS coefficient D
    double noise_power = 1e-14; // receiver noise sigma^2, W (-110 dBm)
};

struct WptParams {
    double g_t = 10.0;          // UAV antenna gain, linear
    double g_r = 10.0;          // sensor antenna gain, linear
    double wavelength = 0.3275; // m
    double p_min_rx = 1e-6;     // rectenna activation threshold, W
    double p_max_rx = 1e-2;     // rectenna saturation threshold, W
    std::vector<double> eta_coeffs{0.5}; // efficiency polynomial, lowest order first
};

struct RotorParams {
    double p0 = 79.86;     // blade-profile hover power, W
    double pm = 88.63;     // induced hover power, W
    double u_tip = 120.0;  // rotor tip speed, m/s
    double v_ind = 4.03;   // mean induced velocity in hover, m/s
    double d0 = 0.6;       // fuselage drag ratio
    double rho0 = 1.225;   // air density, kg/m^3
    double s0 = 0.05;      // rotor solidity
    double disc_area = 0.503; // rotor disc area, m^2
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

inline double distance(const Vec3& a, const Vec3& b) {
    double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Friis with a configurable path-loss exponent.
inline double received_power(double p_tx, double dist, const WptParams& wpt, double alpha) {
    if (dist <= 0.0) throw std::domain_error("received_power: dist must be > 0");
    if (p_tx < 0.0) throw std::domain_error("received_power: p_tx must be >= 0");
    constexpr double four_pi = 4.0 * 3.14159265358979323846;
    return p_tx * wpt.g_t * wpt.g_r * wpt.wavelength * wpt.wavelength /
           (four_pi * four_pi * std::pow(dist, alpha));
}

// Efficiency polynomial, lowest order first.
inline double eta_eval(const std::vector<double>& coeffs, double p_rx) {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * p_rx + coeffs[k];
    return acc;
}

// Nonlinear rectenna: dead below activation, eta(p)*p in range, clamped at
// saturation.
inline double harvested_power(double p_rx, const WptParams& wpt) {
    if (p_rx < 0.0) throw std::domain_error("harvested_power: p_rx must be >= 0");
    if (p_rx < wpt.p_min_rx) return 0.0;
    double p_eff = std::min(p_rx, wpt.p_max_rx);
    double eta = eta_eval(wpt.eta_coeffs, p_eff);
    if (!(eta > 0.0) || eta > 1.0)
        throw std::runtime_error("harvested_power: eta outside (0,1] on the active interval");
    return eta * p_eff;
}

// Logistic LoS probability as a function of elevation angle in degrees.
inline double los_probability(double elevation_deg, const ChannelParams& ch) {
    return 1.0 / (1.0 + ch.c_env * std::exp(-ch.d_env * (elevation_deg - ch.c_env)));
}

inline double elevation_angle_deg(double altitude, double dist3d) {
    if (dist3d <= 0.0) throw std::domain_error("elevation_angle_deg: dist must be > 0");
    return 180.0 / 3.14159265358979323846 * std::asin(std::min(1.0, altitude / dist3d));
}

// LoS/NLoS-averaged large-scale channel gain.
inline double expected_channel_gain(double dist, double elevation_deg, const ChannelParams& ch) {
    if (dist <= 0.0) throw std::domain_error("expected_channel_gain: dist must be > 0");
    double p_los = los_probability(elevation_deg, ch);
    double base = ch.beta0 * std::pow(dist, -ch.alpha);
    return p_los * base + (1.0 - p_los) * ch.kappa * base;
}

inline double achievable_rate(double p_h, double gain, double bandwidth, const ChannelParams& ch) {
    if (p_h < 0.0 || bandwidth < 0.0) throw std::domain_error("achievable_rate: negative input");
    return bandwidth * std::log2(1.0 + p_h * gain / ch.noise_power);
}

inline double data_volume(double rate, double t_d) {
    if (rate < 0.0 || t_d <= 0.0) throw std::domain_error("data_volume: bad input");
    return rate * t_d;
}

// Rotary-wing power: blade profile + induced + parasite.
inline double propulsion_power(double speed, const RotorParams& r) {
    if (speed < 0.0) throw std::domain_error("propulsion_power: speed must be >= 0");
    double tip = speed / r.u_tip;
    double ind = speed / r.v_ind;
    double ind2 = ind * ind;
    double blade = r.p0 * (1.0 + 3.0 * tip * tip);
    double induced = r.pm * std::sqrt(std::sqrt(1.0 + 0.25 * ind2 * ind2) - 0.5 * ind2);
    double parasite = 0.5 * r.d0 * r.rho0 * r.s0 * r.disc_area * speed * speed * speed;
    return blade + induced + parasite;
}

inline double propulsion_energy(double speed, double t_d, const RotorParams& r) {
    if (t_d <= 0.0) throw std::domain_error("propulsion_energy: t_d must be > 0");
    return propulsion_power(speed, r) * t_d;
}

inline double slot_energy(double charge_energy, double prop_energy) {
    if (charge_energy < 0.0 || prop_energy < 0.0) throw std::domain_error("slot_energy: negative input");
    return charge_energy + prop_energy;
}

// Jain's index; the all-zero vector maps to 0 (the raw formula is 0/0 and
// this value only ever multiplies a zero sum).
inline double jain_index(const std::vector<double>& volumes, size_t n) {
    if (volumes.size() != n) throw std::invalid_argument("jain_index: length mismatch");
    if (n == 0) return 0.0;
    double s = 0.0, s2 = 0.0;
    for (double v : volumes) {
        if (v < 0.0) throw std::domain_error("jain_index: negative volume");
        s += v;
        s2 += v * v;
    }
    if (s2 == 0.0) return 0.0;
    return s * s / (static_cast<double>(n) * s2);
}

// Per-slot contribution to the fair-data objective: total volume scaled by
// the slot's Jain index.
inline double fair_data_term(const std::vector<double>& volumes, size_t n) {
    double s = 0.0;
    for (double v : volumes) s += v;
    return s * jain_index(volumes, n);
}

// Fixed-altitude position update; boundary clamping is the caller's job.
inline Vec3 update_position(const Vec3& pos, const Vec3& move) {
    if (move.z != 0.0) throw std::domain_error("update_position: altitude is fixed, move.z must be 0");
    return pos + move;
}

}  // namespace lwpt::core
