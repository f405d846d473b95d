// End-to-end acceptance checks. Each criterion prints exactly one
// [PASS]/[FAIL] line; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lwpt/agent.hpp"
#include "lwpt/config.hpp"
#include "lwpt/core_models.hpp"
#include "lwpt/env.hpp"
#include "lwpt/metrics.hpp"
#include "lwpt/nets.hpp"
#include "lwpt/per_buffer.hpp"
#include "lwpt/rng.hpp"
#include "lwpt/svg_plot.hpp"
#include "lwpt/tensor.hpp"
#include "lwpt/trainer.hpp"
#include "../sac_oracle.hpp"

using namespace lwpt;
using nn::ParamStore;
using nn::TapeSession;
using nn::Tensor;
using nn::Var;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %s (%s)\n", ok ? "PASS" : "FAIL", idx, what, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmtd(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// The small reference scenario used by the training criteria: 3 sensors on a
// 100 m x 100 m area, 50-slot episodes.
RunConfig tiny_run() {
    RunConfig cfg;
    cfg.env.n_sensors = 3;
    cfg.env.x_max = 100.0;
    cfg.env.y_max = 100.0;
    cfg.env.uav_start_x = 50.0;
    cfg.env.uav_start_y = 50.0;
    cfg.env.t_slots = 50;
    cfg.env.xi = 5e-4;
    cfg.agent.hidden = {32, 32};
    cfg.agent.batch_size = 64;
    cfg.agent.warmup_steps = 200;
    cfg.episodes = 300;
    cfg.seeds = {1, 2, 3, 4, 5};
    return cfg;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// 1. Every closed-form model matches an independently written one-liner.
void criterion_formulas() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(20260823);
    auto unif = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    };
    const double pi = 3.14159265358979323846;
    core::WptParams wpt;
    core::ChannelParams ch;
    core::RotorParams rot;

    double worst = 0.0;
    auto check = [&](double got, double want) {
        double denom = std::max({1e-300, std::abs(got), std::abs(want)});
        worst = std::max(worst, std::abs(got - want) / denom);
    };

    for (int k = 0; k < 1000; ++k) {
        double p = unif(0.0, 10.0), d = unif(1.0, 300.0), th = unif(0.0, 90.0);
        double a = unif(2.0, 3.5);

        check(core::received_power(p, d, wpt, a),
              p * wpt.g_t * wpt.g_r * std::pow(wpt.wavelength / (4.0 * pi), 2.0) * std::pow(d, -a));

        double prx = unif(0.0, 2e-2);
        check(core::harvested_power(prx, wpt),
              prx < wpt.p_min_rx ? 0.0 : 0.5 * std::min(prx, wpt.p_max_rx));

        double plos = 1.0 / (1.0 + ch.c_env * std::exp(-ch.d_env * (th - ch.c_env)));
        check(core::los_probability(th, ch), plos);

        double alt = unif(1.0, 100.0), d3 = std::max(alt, unif(1.0, 300.0));
        check(core::elevation_angle_deg(alt, d3), 180.0 / pi * std::asin(alt / d3));

        check(core::expected_channel_gain(d, th, ch),
              (plos + (1.0 - plos) * ch.kappa) * ch.beta0 * std::pow(d, -ch.alpha));

        double ph = unif(0.0, 1e-4), g = unif(1e-10, 1e-6), bw = unif(1e5, 2e7);
        check(core::achievable_rate(ph, g, bw, ch),
              bw * std::log2(1.0 + ph * g / ch.noise_power));
        double td = unif(0.1, 5.0);
        check(core::data_volume(bw, td), bw * td);

        double v = unif(0.0, 60.0);
        check(core::propulsion_power(v, rot),
              rot.p0 * (1.0 + 3.0 * v * v / (rot.u_tip * rot.u_tip)) +
                  rot.pm * std::sqrt(std::sqrt(1.0 + std::pow(v, 4.0) /
                                                        (4.0 * std::pow(rot.v_ind, 4.0))) -
                                     v * v / (2.0 * rot.v_ind * rot.v_ind)) +
                  0.5 * rot.d0 * rot.rho0 * rot.s0 * rot.disc_area * v * v * v);
        check(core::propulsion_energy(v + 1e-9, td, rot),
              core::propulsion_power(v + 1e-9, rot) * td);
        check(core::slot_energy(p, v), p + v);

        size_t n = 1 + static_cast<size_t>(gen() % 8);
        std::vector<double> vols(n);
        for (double& x : vols) x = unif(0.0, 1e6);
        double s = 0.0, s2 = 0.0;
        for (double x : vols) {
            s += x;
            s2 += x * x;
        }
        double jain = s2 == 0.0 ? 0.0 : s * s / (static_cast<double>(n) * s2);
        check(core::jain_index(vols, n), jain);
        check(core::fair_data_term(vols, n), s * jain);
        check(core::jain_index(std::vector<double>(n, 0.0), n), 0.0);

        double eta = 0.0;  // polynomial with 3 coefficients, Horner-free form
        std::vector<double> coeffs{unif(0.1, 0.5), unif(-0.1, 0.1), unif(-0.1, 0.1)};
        eta = coeffs[0] + coeffs[1] * prx + coeffs[2] * prx * prx;
        check(core::eta_eval(coeffs, prx), eta);
    }
    bool ok = worst < 1e-12;
    report(1, "closed-form models match independent single-expression oracles", ok,
           "worst rel err " + fmtd(worst) + ", " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 2. Finite-difference gradient checks over every op kind and the full actor.
double fd_max_err(ParamStore& store, const std::function<Var(TapeSession&)>& fwd) {
    store.zero_grad();
    {
        TapeSession s;
        s.backward(fwd(s));
    }
    auto value = [&]() {
        TapeSession s;
        return s.tape.value(fwd(s)).item();
    };
    const double h = 1e-5;
    double worst = 0.0;
    for (auto& e : store.entries()) {
        for (size_t k = 0; k < e.value.size(); ++k) {
            double saved = e.value.data[k];
            e.value.data[k] = saved + h;
            double fp = value();
            e.value.data[k] = saved - h;
            double fm = value();
            e.value.data[k] = saved;
            double fd = (fp - fm) / (2.0 * h);
            double an = e.grad.data[k];
            double denom = std::max({1e-6, std::abs(fd), std::abs(an)});
            worst = std::max(worst, std::abs(an - fd) / denom);
        }
    }
    return worst;
}

void criterion_gradients() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(99);
    auto rand_tensor = [&](size_t r, size_t c, double lo, double hi) {
        Tensor t = Tensor::zeros({r, c});
        for (double& v : t.data) v = rng.uniform(lo, hi);
        return t;
    };
    double worst = 0.0;
    int ops = 0;
    // every op kind, wrapped into a scalar through a fixed weighting so
    // upstream gradients are non-uniform
    Tensor wgt = rand_tensor(2, 3, 0.5, 1.5);
    auto check_op = [&](const char* name, Tensor a_init, Tensor b_init,
                        const std::function<Var(TapeSession&, Var, Var)>& op) {
        ParamStore store;
        store.add("a", std::move(a_init));
        bool binary = b_init.size() > 0;
        if (binary) store.add("b", std::move(b_init));
        Tensor w_fixed;  // same weighting on every finite-difference evaluation
        double err = fd_max_err(store, [&](TapeSession& s) {
            Var a = s.param(store, "a");
            Var b = binary ? s.param(store, "b") : a;
            Var out = op(s, a, b);
            if (w_fixed.size() == 0)
                w_fixed = rand_tensor(s.tape.value(out).rows(), s.tape.value(out).cols(), 0.5, 1.5);
            return nn::sum_all(nn::mul(out, s.input(w_fixed)));
        });
        (void)name;
        worst = std::max(worst, err);
        ++ops;
    };
    Tensor A = rand_tensor(2, 3, -1.0, 1.0);
    Tensor Ap = rand_tensor(2, 3, 0.3, 2.0);   // positive, away from kinks
    Tensor B = rand_tensor(2, 3, 0.4, 1.6);
    Tensor Brow = rand_tensor(1, 3, -0.8, 0.8);

    check_op("add", A, B, [](TapeSession&, Var a, Var b) { return nn::add(a, b); });
    check_op("sub", A, Brow, [](TapeSession&, Var a, Var b) { return nn::sub(a, b); });
    check_op("mul", A, B, [](TapeSession&, Var a, Var b) { return nn::mul(a, b); });
    check_op("div", A, B, [](TapeSession&, Var a, Var b) { return nn::div(a, b); });
    check_op("minimum", A, B, [](TapeSession&, Var a, Var b) { return nn::minimum(a, b); });
    check_op("neg", A, {}, [](TapeSession&, Var a, Var) { return nn::neg(a); });
    check_op("scale", A, {}, [](TapeSession&, Var a, Var) { return nn::scale(a, -1.7); });
    check_op("add_const", A, {}, [](TapeSession&, Var a, Var) { return nn::add_const(a, 2.5); });
    check_op("relu", Ap, {}, [](TapeSession&, Var a, Var) { return nn::relu(a); });
    check_op("tanh", A, {}, [](TapeSession&, Var a, Var) { return nn::tanh_(a); });
    check_op("sigmoid", A, {}, [](TapeSession&, Var a, Var) { return nn::sigmoid(a); });
    check_op("exp", A, {}, [](TapeSession&, Var a, Var) { return nn::exp_(a); });
    check_op("log", Ap, {}, [](TapeSession&, Var a, Var) { return nn::log_(a); });
    check_op("square", A, {}, [](TapeSession&, Var a, Var) { return nn::square(a); });
    check_op("recip", Ap, {}, [](TapeSession&, Var a, Var) { return nn::recip(a); });
    check_op("clamp", Ap, {}, [](TapeSession&, Var a, Var) { return nn::clamp(a, 0.1, 1.9); });
    check_op("matmul", A, rand_tensor(3, 2, -1.0, 1.0),
             [](TapeSession&, Var a, Var b) { return nn::matmul(a, b); });
    Tensor bias = rand_tensor(1, 4, -0.5, 0.5);
    check_op("affine", A, rand_tensor(3, 4, -1.0, 1.0), [&bias](TapeSession& s, Var a, Var b) {
        return nn::affine(a, b, s.input(bias));
    });
    check_op("concat_cols", A, B,
             [](TapeSession&, Var a, Var b) { return nn::concat_cols(a, b); });
    check_op("sum_all", A, {}, [](TapeSession&, Var a, Var) { return nn::sum_all(a); });
    check_op("mean_all", A, {}, [](TapeSession&, Var a, Var) { return nn::mean_all(a); });
    check_op("sum_cols", A, {}, [](TapeSession&, Var a, Var) { return nn::sum_cols(a); });
    check_op("mean_cols", A, {}, [](TapeSession&, Var a, Var) { return nn::mean_cols(a); });
    check_op("var_cols", B, {}, [](TapeSession&, Var a, Var) { return nn::var_cols(a); });
    check_op("pfam", B, {}, [](TapeSession&, Var a, Var) { return nn::pfam(a, 1e-4); });

    // full actor (attention after both hidden layers) on 20 random nets
    double worst_actor = 0.0;
    for (int net = 0; net < 20; ++net) {
        int sdim = 3 + net % 4;
        AgentConfig cfg;
        cfg.hidden = {5, 4};
        cfg.use_pfam = true;
        SacPpvAgent agent(sdim, cfg, 1000 + net);
        Tensor x = rand_tensor(3, static_cast<size_t>(sdim), 0.0, 1.0);
        Tensor eps = rand_tensor(3, 3, -1.0, 1.0);
        double err = fd_max_err(agent.actor_params(), [&](TapeSession& s) {
            auto heads = agent.actor_forward(s, s.input(x));
            nn::SquashedSample smp = nn::sample_squashed(s, heads.mu, heads.log_sigma, eps);
            return nn::add(nn::mean_all(smp.log_prob), nn::mean_all(smp.action));
        });
        worst_actor = std::max(worst_actor, err);
    }
    bool ok = worst < 1e-4 && worst_actor < 1e-4;
    report(2, "finite-difference gradcheck over all ops and the attention actor", ok,
           std::to_string(ops) + " ops worst " + fmtd(worst) + ", actor worst " +
               fmtd(worst_actor) + ", " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 3. Prioritized sampling follows p_i^alpha / sum p^alpha.
double chi2_quantile_99(double dof) {
    double a = 2.0 / (9.0 * dof);
    double t = 1.0 - a + 2.3263479 * std::sqrt(a);  // Wilson-Hilferty
    return dof * t * t * t;
}

void criterion_per() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(424242);
    bool chi_ok = true, scan_ok = true;
    double worst_stat = 0.0;

    for (int rep = 0; rep < 3; ++rep) {
        size_t n = 16 + static_cast<size_t>(rng.below(49));  // up to 64
        ReplayBuffer buf(n, 0.6, 1e-6);
        std::vector<double> pri(n);
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) {
            Transition tr;
            tr.s = {0.0};
            tr.a = {0.0, 0.0, 0.0};
            tr.s_next = {0.0};
            buf.push(tr);
            pri[i] = rng.uniform(0.05, 4.0);
            idx[i] = i;
        }
        buf.update_priorities(idx, pri);

        std::vector<double> mass(n);
        double tot = 0.0;
        for (size_t i = 0; i < n; ++i) {
            mass[i] = std::pow(pri[i] + 1e-6, 0.6);
            tot += mass[i];
        }
        // exact agreement with a linear-scan oracle on prefix queries
        for (int k = 0; k < 5000; ++k) {
            double m = rng.uniform01() * tot;
            double acc = 0.0;
            size_t want = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += buf.tree_leaf(i);
                if (m < acc) {
                    want = i;
                    break;
                }
            }
            double acc2 = 0.0;
            size_t oracle = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc2 += mass[i];
                if (m < acc2) {
                    oracle = i;
                    break;
                }
            }
            if (want != oracle) scan_ok = false;
        }

        const size_t draws = 100000;
        std::vector<size_t> count(n, 0);
        size_t got = 0;
        while (got < draws) {
            auto s = buf.sample(std::min<size_t>(n, draws - got), 1.0, rng);
            for (size_t i : s.indices) ++count[i];
            got += s.indices.size();
        }
        double chi2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double e = mass[i] / tot * static_cast<double>(draws);
            chi2 += (count[i] - e) * (count[i] - e) / e;
        }
        double q = chi2_quantile_99(static_cast<double>(n - 1));
        worst_stat = std::max(worst_stat, chi2 / q);
        if (chi2 >= q) chi_ok = false;
    }
    report(3, "prioritized sampling matches the priority-power law", chi_ok && scan_ok,
           "worst chi2/q99 " + fmtd(worst_stat) + ", linear-scan " +
               (scan_ok ? "exact" : "MISMATCH") + ", " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 4. All switches off: one update equals an independent minimal SAC step.
void criterion_vanilla_sac() {
    auto t0 = std::chrono::steady_clock::now();
    AgentConfig cfg;
    cfg.hidden = {16, 16};
    cfg.use_pfam = false;
    cfg.use_per = false;
    cfg.use_vrc = false;
    int sdim = 8;
    SacPpvAgent agent(sdim, cfg, 31337);
    auto before = agent.snapshot();

    Rng rng(7);
    size_t b = 32;
    ReplayBuffer buf(b, 0.6, 1e-6);
    for (size_t i = 0; i < b; ++i) {
        Transition tr;
        for (int k = 0; k < sdim; ++k) tr.s.push_back(rng.uniform(0.0, 1.0));
        for (int k = 0; k < 3; ++k) tr.a.push_back(rng.uniform(-0.95, 0.95));
        tr.r = rng.uniform(-1.0, 1.0);
        for (int k = 0; k < sdim; ++k) tr.s_next.push_back(rng.uniform(0.0, 1.0));
        tr.done = (i % 7 == 0);
        buf.push(tr);
    }
    auto batch = SacPpvAgent::make_batch(buf.sample_uniform(b, rng));
    Tensor eps_next = Tensor::zeros({b, 3}), eps_cur = Tensor::zeros({b, 3});
    for (double& e : eps_next.data) e = rng.normal();
    for (double& e : eps_cur.data) e = rng.normal();

    agent.update_batch(batch, eps_next, eps_cur);
    auto got = agent.snapshot();
    auto want = sacref::one_update(before, cfg, batch, eps_next, eps_cur);

    double worst = 1e300;
    bool ok = got.size() == want.size();
    if (ok) {
        worst = 0.0;
        for (size_t i = 0; i < got.size() && ok; ++i) {
            if (got[i].first != want[i].first || got[i].second.size() != want[i].second.size()) {
                ok = false;
                break;
            }
            for (size_t k = 0; k < got[i].second.size(); ++k)
                worst = std::max(worst, std::abs(got[i].second.data[k] - want[i].second.data[k]));
        }
        ok = ok && worst < 1e-8;
    }
    report(4, "vanilla update step equals the hand-derived reference", ok,
           "max param deviation " + fmtd(worst) + ", " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 5. Reward centering converges on a constant-reward single-state MDP.
void criterion_vrc() {
    auto t0 = std::chrono::steady_clock::now();
    AgentConfig cfg;
    cfg.hidden = {4, 4};
    cfg.vrc_eta = 0.5;
    cfg.lr = 0.1;
    cfg.gamma = 0.99;
    SacPpvAgent agent(2, cfg, 1);

    const double c = 2.0;  // true average reward
    double v = 0.0;
    int entered = -1;
    for (int k = 0; k < 10000; ++k) {
        double delta = (c - agent.r_bar()) + cfg.gamma * v - v;
        agent.vrc_update(delta);
        v += cfg.lr * delta;
        if (entered < 0 && std::abs(agent.r_bar() - c) <= 0.05 * c) entered = k + 1;
    }
    bool ok = entered > 0 && std::abs(agent.r_bar() - c) <= 0.05 * c;
    report(5, "reward center enters +-5% of the true average reward", ok,
           "r_bar " + fmtd(agent.r_bar()) + " after " + std::to_string(entered) +
               " updates, " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 6. Conservation and invariants over 100 seeded episodes.
void criterion_conservation() {
    auto t0 = std::chrono::steady_clock::now();
    EnvConfig cfg = tiny_run().env;
    bool ok = true;
    double worst_cons = 0.0;
    for (uint64_t seed = 1; seed <= 100 && ok; ++seed) {
        Environment env(cfg, seed);
        Rng act(seed * 13 + 5);
        env.reset();
        double last_energy = 0.0;
        while (!env.done()) {
            env.step({act.uniform(-1.0, 1.0), act.uniform(-1.0, 1.0), act.uniform(-1.0, 1.0)});
            const WorldState& s = env.state();
            if (s.uav_position.x < cfg.x_min || s.uav_position.x > cfg.x_max ||
                s.uav_position.y < cfg.y_min || s.uav_position.y > cfg.y_max)
                ok = false;
            if (!(s.cum_energy > last_energy)) ok = false;
            last_energy = s.cum_energy;
        }
        for (const BlsNode& sn : env.state().sensors) {
            double lhs = sn.cumulative_collected_bits + sn.pending_bits;
            double denom = std::max(1.0, sn.total_generated_bits);
            worst_cons = std::max(worst_cons, std::abs(lhs - sn.total_generated_bits) / denom);
            if (sn.pending_bits < 0.0) ok = false;
        }
    }
    ok = ok && worst_cons < 1e-12;
    report(6, "bit conservation, bounds, and monotone energy over 100 episodes", ok,
           "worst conservation residual " + fmtd(worst_cons) + ", " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 7. Bit-identical training metrics for identical (config, seed).
std::string strip_wall_time(const std::string& csv) {
    std::stringstream in(csv), out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            size_t pos = line.rfind(',');
            if (pos != std::string::npos) line.resize(pos);
        }
        out << line << '\n';
    }
    return out.str();
}

void criterion_determinism(const fs::path& tmp) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = tiny_run();
    cfg.episodes = 50;
    auto run_once = [&](const fs::path& path) {
        SacPpvAgent agent(cfg.env.state_dim(), cfg.agent, 7);
        auto recs = train_agent(agent, cfg.env, cfg.episodes, 7);
        write_metrics_csv(path.string(), recs);
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = strip_wall_time(run_once(tmp / "det_a.csv"));
    std::string b = strip_wall_time(run_once(tmp / "det_b.csv"));
    bool ok = !a.empty() && a == b;
    report(7, "repeated (config, seed) training runs are byte-identical", ok,
           std::to_string(cfg.episodes) + " episodes, " + fmtd(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// 8 + 9. Learning signal vs random, and enhancement direction vs vanilla SAC.
std::vector<EpisodeRecord> train_run(const RunConfig& cfg, uint64_t seed) {
    SacPpvAgent agent(cfg.env.state_dim(), cfg.agent, seed);
    return train_agent(agent, cfg.env, cfg.episodes, seed);
}

double tail_mean(const std::vector<EpisodeRecord>& recs, size_t tail,
                 double EpisodeRecord::* field) {
    std::vector<double> v;
    size_t start = recs.size() > tail ? recs.size() - tail : 0;
    for (size_t i = start; i < recs.size(); ++i) v.push_back(recs[i].*field);
    return mean_of(v);
}

void criterion_learning_and_direction() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = tiny_run();

    // random baseline: overall mean return across all seeds
    std::vector<double> rand_returns;
    for (uint64_t seed : cfg.seeds) {
        auto recs = run_policy(random_policy(), cfg.env, cfg.episodes, seed);
        for (const EpisodeRecord& r : recs) rand_returns.push_back(r.ret);
    }
    double rand_mean = mean_of(rand_returns);

    std::vector<std::vector<EpisodeRecord>> ppv, vanilla;
    for (uint64_t seed : cfg.seeds) ppv.push_back(train_run(cfg, seed));
    RunConfig vcfg = cfg;
    vcfg.agent.use_pfam = vcfg.agent.use_per = vcfg.agent.use_vrc = false;
    for (uint64_t seed : cfg.seeds) vanilla.push_back(train_run(vcfg, seed));

    // criterion 8: final-20 mean return at least 1.5x the random mean, all seeds
    bool learn_ok = rand_mean > 0.0;
    double min_ratio = 1e300;
    for (const auto& recs : ppv) {
        double m = tail_mean(recs, 20, &EpisodeRecord::ret);
        min_ratio = std::min(min_ratio, m / rand_mean);
        if (m < 1.5 * rand_mean) learn_ok = false;
    }
    report(8, "learned return beats 1.5x the random baseline on every seed", learn_ok,
           "random mean " + fmtd(rand_mean) + ", min ratio " + fmtd(min_ratio) + ", " +
               fmtd(elapsed_s(t0)) + " s");

    // criterion 9: fair data (cumulative fairness metric, final-100 mean)
    auto t1 = std::chrono::steady_clock::now();
    int wins = 0;
    for (size_t i = 0; i < cfg.seeds.size(); ++i) {
        double p = tail_mean(ppv[i], 100, &EpisodeRecord::fair_data_cum_bits);
        double v = tail_mean(vanilla[i], 100, &EpisodeRecord::fair_data_cum_bits);
        if (p >= v) ++wins;
    }

    // single-enhancement ablations must finish with finite metrics
    bool ablate_ok = true;
    const char* kAblations[3] = {"pfam", "per", "vrc"};
    for (int k = 0; k < 3; ++k) {
        RunConfig acfg = cfg;
        acfg.episodes = 60;
        if (k == 0) acfg.agent.use_pfam = false;
        if (k == 1) acfg.agent.use_per = false;
        if (k == 2) acfg.agent.use_vrc = false;
        try {
            auto recs = train_run(acfg, 1);
            for (const EpisodeRecord& r : recs)
                if (!std::isfinite(r.ret) || !std::isfinite(r.fair_data_cum_bits) ||
                    !std::isfinite(r.energy_j))
                    ablate_ok = false;
        } catch (const std::exception& e) {
            (void)kAblations[k];
            ablate_ok = false;
        }
    }
    bool ok = wins >= 4 && ablate_ok;
    report(9, "full agent matches or beats vanilla SAC fair data on 4+/5 seeds", ok,
           std::to_string(wins) + "/5 seeds, ablations " + (ablate_ok ? "clean" : "FAILED") +
               ", " + fmtd(elapsed_s(t1)) + " s");
}

// ---------------------------------------------------------------------------
// 10. Greedy sensor-count sweep: nondecreasing fair data plus artifacts.
void criterion_sweep(const fs::path& tmp) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = tiny_run();
    std::vector<int> counts{3, 6, 9};
    std::vector<SweepRow> rows;
    std::vector<double> means;
    for (int n : counts) {
        EnvConfig env = cfg.env;
        env.n_sensors = n;
        std::vector<double> cell;
        for (uint64_t seed : cfg.seeds) {
            auto recs = run_policy(greedy_policy(), env, 5, seed);
            double fair = 0.0, ret = 0.0, energy = 0.0;
            for (const EpisodeRecord& r : recs) {
                fair += r.fair_data_cum_bits;
                ret += r.ret;
                energy += r.energy_j;
            }
            double m = static_cast<double>(recs.size());
            rows.push_back(SweepRow{n, seed, "greedy", ret / m, fair / m, energy / m});
            cell.push_back(fair / m);
        }
        means.push_back(mean_of(cell));
    }
    bool trend_ok = true;
    for (size_t i = 1; i < means.size(); ++i)
        if (means[i] < means[i - 1]) trend_ok = false;

    fs::path csv = tmp / "sweep.csv";
    fs::path svg = tmp / "sweep.svg";
    write_sweep_csv(csv.string(), rows);
    std::vector<BarEntry> bars;
    for (size_t i = 0; i < counts.size(); ++i) {
        double e = 0.0;
        for (const SweepRow& r : rows)
            if (r.n_sensors == counts[i]) e += r.energy / static_cast<double>(cfg.seeds.size());
        bars.push_back(BarEntry{std::to_string(counts[i]) + " sensors", means[i], e});
    }
    write_bar_chart_svg(svg.string(), bars);

    std::ifstream in(csv);
    std::string first;
    std::getline(in, first);
    bool artifacts_ok = first == kSweepSchema && fs::file_size(svg) > 0;

    report(10, "greedy sweep fair data nondecreasing in sensor count with artifacts",
           trend_ok && artifacts_ok,
           "means " + fmtd(means[0]) + " / " + fmtd(means[1]) + " / " + fmtd(means[2]) + ", " +
               fmtd(elapsed_s(t0)) + " s");
}

}  // namespace

int main() {
    fs::path tmp = fs::temp_directory_path() / "lwpt_acceptance";
    fs::create_directories(tmp);

    criterion_formulas();
    criterion_gradients();
    criterion_per();
    criterion_vanilla_sac();
    criterion_vrc();
    criterion_conservation();
    criterion_determinism(tmp);
    criterion_learning_and_direction();
    criterion_sweep(tmp);

    fs::remove_all(tmp);
    if (g_failures == 0) std::printf("acceptance: all criteria passed\n");
    else std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
