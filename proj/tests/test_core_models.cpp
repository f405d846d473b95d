#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lwpt/core_models.hpp"
#include "lwpt/rng.hpp"

using namespace lwpt;
using namespace lwpt::core;

namespace {
const WptParams kWpt;
const ChannelParams kCh;
const RotorParams kRotor;

bool close(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

TEST_CASE("received power") {
    CHECK(received_power(0.0, 123.0, kWpt, 2.6) == 0.0);
    // power-law scaling
    double r1 = received_power(5.0, 40.0, kWpt, 2.6);
    double r2 = received_power(5.0, 80.0, kWpt, 2.6);
    CHECK(close(r2 / r1, std::pow(2.0, -2.6)));
    // frozen oracle value
    CHECK(close(received_power(10.0, 50.0, kWpt, 2.6), 2.5982496014299075e-05));
    CHECK_THROWS_AS(received_power(1.0, 0.0, kWpt, 2.6), std::domain_error);
    CHECK_THROWS_AS(received_power(-1.0, 5.0, kWpt, 2.6), std::domain_error);

    // strictly decreasing in dist, linear in p_tx
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        double p = rng.uniform(0.1, 10.0);
        double d = rng.uniform(1.0, 300.0);
        CHECK(received_power(p, d * 1.01, kWpt, 2.6) < received_power(p, d, kWpt, 2.6));
        CHECK(close(received_power(3.0 * p, d, kWpt, 2.6), 3.0 * received_power(p, d, kWpt, 2.6)));
    }
}

TEST_CASE("rectenna harvesting") {
    CHECK(harvested_power(kWpt.p_min_rx / 2.0, kWpt) == 0.0);
    CHECK(harvested_power(2.0 * kWpt.p_max_rx, kWpt) == harvested_power(kWpt.p_max_rx, kWpt));
    CHECK(close(harvested_power(1e-5, kWpt), 5e-6));
    CHECK_THROWS_AS(harvested_power(-1e-9, kWpt), std::domain_error);

    WptParams bad = kWpt;
    bad.eta_coeffs = {2.0};  // eta outside (0,1]
    CHECK_THROWS(harvested_power(1e-4, bad));

    // nondecreasing, bounded by eta(p_max)*p_max
    Rng rng(12);
    double cap = harvested_power(kWpt.p_max_rx, kWpt);
    double prev = 0.0;
    for (int i = 0; i <= 500; ++i) {
        double p = 2.0 * kWpt.p_max_rx * i / 500.0;
        double h = harvested_power(p, kWpt);
        CHECK(h >= prev);
        CHECK(h <= cap);
        prev = h;
    }
    (void)rng;
}

TEST_CASE("eta polynomial") {
    CHECK(eta_eval({0.5}, 0.123) == 0.5);
    CHECK(close(eta_eval({0.1, 2.0, 3.0}, 0.5), 0.1 + 2.0 * 0.5 + 3.0 * 0.25));
}

TEST_CASE("los probability") {
    CHECK(close(los_probability(kCh.c_env, kCh), 1.0 / 11.0));
    CHECK(std::abs(los_probability(90.0, kCh) - 1.0) < 1e-10);
    // strictly increasing until the logistic saturates to 1.0 in double
    // precision (theta around 75 deg for the default C, D)
    for (double t = 0.0; t < 65.0; t += 1.0)
        CHECK(los_probability(t + 1.0, kCh) > los_probability(t, kCh));
    for (double t = 65.0; t < 90.0; t += 1.0)
        CHECK(los_probability(t + 1.0, kCh) >= los_probability(t, kCh));
}

TEST_CASE("expected channel gain") {
    ChannelParams k1 = kCh;
    k1.kappa = 1.0;
    for (double th : {0.0, 30.0, 60.0, 90.0})
        CHECK(close(expected_channel_gain(50.0, th, k1), 1e-3 * std::pow(50.0, -2.6)));
    CHECK(close(expected_channel_gain(50.0, 90.0, kCh), 3.825409999160147e-08));
    CHECK_THROWS_AS(expected_channel_gain(0.0, 45.0, kCh), std::domain_error);

    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        double d = rng.uniform(1.0, 400.0);
        double th = rng.uniform(0.0, 90.0);
        double g = expected_channel_gain(d, th, kCh);
        double base = kCh.beta0 * std::pow(d, -kCh.alpha);
        CHECK(g >= kCh.kappa * base);
        CHECK(g <= base);
    }
}

TEST_CASE("achievable rate") {
    CHECK(achievable_rate(0.0, 1e-8, 1e6, kCh) == 0.0);
    CHECK(close(achievable_rate(1e-7, 1e-7, 1e6, kCh), 1e6));  // SNR exactly 1
    CHECK(close(achievable_rate(1.3e-5, 3.83e-8, 1e6, kCh), 5666472.568842073));

    Rng rng(14);
    for (int i = 0; i < 100; ++i) {
        double p = rng.uniform(1e-7, 1e-4);
        double g = rng.uniform(1e-9, 1e-6);
        double b = rng.uniform(1e5, 1e7);
        CHECK(achievable_rate(p * 1.1, g, b, kCh) >= achievable_rate(p, g, b, kCh));
        CHECK(achievable_rate(p, g * 1.1, b, kCh) >= achievable_rate(p, g, b, kCh));
        CHECK(achievable_rate(p, g, b * 1.1, kCh) >= achievable_rate(p, g, b, kCh));
    }
}

TEST_CASE("data volume") {
    CHECK(data_volume(0.0, 1.0) == 0.0);
    CHECK(data_volume(123.0, 1.0) == 123.0);
    CHECK(close(data_volume(5.64e6, 0.5), 2.82e6));
}

TEST_CASE("propulsion energy") {
    CHECK(close(propulsion_energy(0.0, 1.0, kRotor), 168.49));
    CHECK(close(propulsion_energy(0.0, 2.5, kRotor), 2.5 * (kRotor.p0 + kRotor.pm)));
    CHECK(close(propulsion_energy(10.0, 1.0, kRotor), 126.03368677372114));
    CHECK(close(propulsion_energy(20.0, 1.0, kRotor), 178.30026668719756));

    // energy valley: a positive speed beats hovering
    double best = propulsion_power(0.0, kRotor);
    double vstar = 0.0;
    for (double v = 0.1; v <= 30.0; v += 0.1) {
        double p = propulsion_power(v, kRotor);
        if (p < best) {
            best = p;
            vstar = v;
        }
    }
    CHECK(vstar > 0.0);
    CHECK(best < propulsion_power(0.0, kRotor));
}

TEST_CASE("slot energy") {
    CHECK(slot_energy(0.0, 42.0) == 42.0);
    CHECK(slot_energy(42.0, 0.0) == 42.0);
    CHECK(close(slot_energy(10.0, 168.49), 178.49));
}

TEST_CASE("jain index and fair data term") {
    CHECK(jain_index({3.0, 3.0, 3.0}, 3) == 1.0);
    CHECK(close(jain_index({0.0, 5.0, 0.0, 0.0}, 4), 0.25));
    CHECK(close(jain_index({1.0, 2.0, 3.0}, 3), 0.8571428571428571));
    CHECK(jain_index({0.0, 0.0}, 2) == 0.0);
    CHECK(fair_data_term({0.0, 0.0}, 2) == 0.0);
    CHECK(close(fair_data_term({4.0, 4.0, 4.0}, 3), 12.0));
    CHECK(close(fair_data_term({1.0, 2.0, 3.0}, 3), 5.142857142857142));

    // scale invariance of the index
    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> v(5);
        for (double& x : v) x = rng.uniform(0.0, 10.0);
        double j1 = jain_index(v, 5);
        CHECK(j1 <= 1.0 + 1e-12);
        if (j1 > 0.0) CHECK(j1 >= 1.0 / 5.0 - 1e-12);
        std::vector<double> w = v;
        for (double& x : w) x *= 7.5;
        CHECK(close(jain_index(w, 5), j1));
    }
}

TEST_CASE("position update") {
    Vec3 p{100.0, 100.0, 50.0};
    CHECK(update_position(p, {0.0, 0.0, 0.0}) == p);
    CHECK(update_position(p, {20.0, 0.0, 0.0}) == Vec3{120.0, 100.0, 50.0});
    Vec3 m{3.0, -4.0, 0.0};
    CHECK(update_position(update_position(p, m), {-m.x, -m.y, 0.0}) == p);
    CHECK_THROWS_AS(update_position(p, {0.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("purity: identical inputs give bit-identical outputs") {
    Rng rng(16);
    for (int i = 0; i < 50; ++i) {
        double p = rng.uniform(0.0, 10.0);
        double d = rng.uniform(1.0, 200.0);
        double v = rng.uniform(0.0, 25.0);
        CHECK(received_power(p, d, kWpt, 2.6) == received_power(p, d, kWpt, 2.6));
        CHECK(propulsion_power(v, kRotor) == propulsion_power(v, kRotor));
        CHECK(expected_channel_gain(d, 45.0, kCh) == expected_channel_gain(d, 45.0, kCh));
    }
}
