#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lwpt/agent.hpp"
#include "lwpt/config.hpp"
#include "lwpt/env.hpp"
#include "lwpt/metrics.hpp"
#include "lwpt/svg_plot.hpp"
#include "lwpt/trainer.hpp"

namespace fs = std::filesystem;
using namespace lwpt;

namespace {

constexpr const char* kCodeVersion = "1.0.0";

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void apply_ablations(AgentConfig& cfg, const std::string& list) {
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "pfam") cfg.use_pfam = false;
        else if (tok == "per") cfg.use_per = false;
        else if (tok == "vrc") cfg.use_vrc = false;
        else if (!tok.empty()) throw ConfigError("--ablate: unknown switch '" + tok + "'");
    }
}

void apply_algorithm(RunConfig& cfg) {
    if (cfg.algorithm == "sac") {
        cfg.agent.use_pfam = false;
        cfg.agent.use_per = false;
        cfg.agent.use_vrc = false;
    }
}

std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("io: cannot write " + path.string());
    out << text;
}

fs::path prepare_run_dir(const std::string& out_dir, bool force) {
    fs::path dir(out_dir);
    if (fs::exists(dir)) {
        if (!force) throw IoError("io: output directory exists: " + out_dir + " (use --force)");
        fs::remove_all(dir);
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("io: cannot create " + out_dir + ": " + ec.message());
    return dir;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg) {
    nlohmann::json m;
    m["config_hash"] = hash_hex(config_hash(cfg));
    m["seeds"] = cfg.seeds;
    m["episodes"] = cfg.episodes;
    m["algorithm"] = cfg.algorithm;
    m["code_version"] = kCodeVersion;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
    write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");
}

Policy baseline_policy(const std::string& algorithm) {
    if (algorithm == "random") return random_policy();
    if (algorithm == "greedy") return greedy_policy();
    throw ConfigError("unknown baseline algorithm '" + algorithm + "'");
}

bool learning_algorithm(const std::string& algorithm) {
    return algorithm == "sacppv" || algorithm == "sac";
}

struct SeedResult {
    std::vector<EpisodeRecord> records;
    std::vector<TraceRow> trace;
};

// One full training (or baseline) run for one seed; writes per-seed outputs.
SeedResult run_one_seed(const RunConfig& cfg, uint64_t seed, const fs::path& dir, bool quiet) {
    SeedResult res;
    std::string tag = "seed" + std::to_string(seed);
    if (learning_algorithm(cfg.algorithm)) {
        SacPpvAgent agent(cfg.env.state_dim(), cfg.agent, seed);
        int every = std::max(1, cfg.episodes / 5);
        auto on_ep = [&](const EpisodeRecord& r) {
            if ((r.episode + 1) % every == 0)
                agent.save_checkpoint((dir / ("checkpoint_" + tag + "_ep" +
                                              std::to_string(r.episode + 1) + ".bin")).string());
            if (!quiet && (r.episode + 1) % 10 == 0)
                std::cout << tag << " ep " << r.episode + 1 << "/" << cfg.episodes
                          << " return " << r.ret << "\n";
        };
        res.records = train_agent(agent, cfg.env, cfg.episodes, seed, on_ep);
        agent.save_checkpoint((dir / ("checkpoint_" + tag + "_final.bin")).string());
        res.trace = rollout_trace(agent_policy(agent, true), cfg.env, seed);
    } else {
        Policy pol = baseline_policy(cfg.algorithm);
        res.records = run_policy(pol, cfg.env, cfg.episodes, seed);
        res.trace = rollout_trace(pol, cfg.env, seed);
    }
    write_metrics_csv((dir / ("metrics_" + tag + ".csv")).string(), res.records);
    write_trajectory_csv((dir / ("trajectory_" + tag + ".csv")).string(), res.trace);
    return res;
}

struct Summary {
    double mean_return = 0.0, std_return = 0.0;
    double mean_fair = 0.0, std_fair = 0.0;
    double mean_energy = 0.0, std_energy = 0.0;
};

Summary summarize(const std::vector<EpisodeRecord>& recs) {
    Summary s;
    if (recs.empty()) return s;
    double n = static_cast<double>(recs.size());
    for (const EpisodeRecord& r : recs) {
        s.mean_return += r.ret;
        s.mean_fair += r.fair_data_cum_bits;
        s.mean_energy += r.energy_j;
    }
    s.mean_return /= n;
    s.mean_fair /= n;
    s.mean_energy /= n;
    for (const EpisodeRecord& r : recs) {
        s.std_return += (r.ret - s.mean_return) * (r.ret - s.mean_return);
        s.std_fair += (r.fair_data_cum_bits - s.mean_fair) * (r.fair_data_cum_bits - s.mean_fair);
        s.std_energy += (r.energy_j - s.mean_energy) * (r.energy_j - s.mean_energy);
    }
    s.std_return = std::sqrt(s.std_return / n);
    s.std_fair = std::sqrt(s.std_fair / n);
    s.std_energy = std::sqrt(s.std_energy / n);
    return s;
}

int cmd_train(const RunConfig& cfg, bool force) {
    fs::path dir = prepare_run_dir(cfg.out_dir, force);
    write_manifest(dir, cfg);
    for (uint64_t seed : cfg.seeds) run_one_seed(cfg, seed, dir, false);
    std::cout << "run complete: " << dir.string() << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& checkpoint, bool force) {
    fs::path dir = prepare_run_dir(cfg.out_dir, force);
    write_manifest(dir, cfg);

    Policy pol;
    SacPpvAgent agent(cfg.env.state_dim(), cfg.agent, cfg.seeds.front());
    if (learning_algorithm(cfg.algorithm)) {
        if (!checkpoint.empty()) agent.load_checkpoint(checkpoint);
        pol = agent_policy(agent, true);
    } else {
        pol = baseline_policy(cfg.algorithm);
    }

    std::vector<EpisodeRecord> all;
    for (uint64_t seed : cfg.seeds) {
        std::vector<EpisodeRecord> recs = run_policy(pol, cfg.env, cfg.episodes, seed);
        for (EpisodeRecord& r : recs) {
            r.episode = static_cast<int>(all.size());
            all.push_back(r);
        }
    }
    write_metrics_csv((dir / "eval_metrics.csv").string(), all);
    Summary s = summarize(all);
    std::ostringstream msg;
    msg << "episodes " << all.size() << "\n"
        << "return " << format_double(s.mean_return) << " +- " << format_double(s.std_return) << "\n"
        << "fair_data " << format_double(s.mean_fair) << " +- " << format_double(s.std_fair) << "\n"
        << "energy_J " << format_double(s.mean_energy) << " +- " << format_double(s.std_energy) << "\n";
    write_text(dir / "summary.txt", msg.str());
    std::cout << msg.str();
    return 0;
}

int cmd_sweep(const RunConfig& base, const std::vector<int>& counts, bool force) {
    if (counts.empty()) throw ConfigError("--sensors: at least one count required");
    for (int c : counts)
        if (c < 1) throw ConfigError("--sensors: counts must be >= 1");

    fs::path dir = prepare_run_dir(base.out_dir, force);
    write_manifest(dir, base);

    struct Cell {
        int n_sensors;
        uint64_t seed;
    };
    std::vector<Cell> cells;
    for (int c : counts)
        for (uint64_t s : base.seeds) cells.push_back({c, s});

    std::vector<SweepRow> rows(cells.size());
    std::mutex io_mutex;
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string fail_msg;

    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size() || failed.load()) return;
            const Cell& cell = cells[i];
            RunConfig cfg = base;
            cfg.env.n_sensors = cell.n_sensors;
            cfg.seeds = {cell.seed};
            try {
                std::vector<EpisodeRecord> eval_recs;
                if (learning_algorithm(cfg.algorithm)) {
                    SacPpvAgent agent(cfg.env.state_dim(), cfg.agent, cell.seed);
                    train_agent(agent, cfg.env, cfg.episodes, cell.seed);
                    eval_recs = run_policy(agent_policy(agent, true), cfg.env, 5, cell.seed);
                } else {
                    eval_recs =
                        run_policy(baseline_policy(cfg.algorithm), cfg.env, 5, cell.seed);
                }
                Summary s = summarize(eval_recs);
                rows[i] = SweepRow{cell.n_sensors, cell.seed, cfg.algorithm, s.mean_return,
                                   s.mean_fair, s.mean_energy};
                std::lock_guard<std::mutex> lk(io_mutex);
                std::cout << "cell n=" << cell.n_sensors << " seed=" << cell.seed
                          << " fair_data=" << s.mean_fair << "\n";
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(io_mutex);
                failed.store(true);
                fail_msg = e.what();
                return;
            }
        }
    };

    unsigned n_workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                         static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failed.load()) throw std::runtime_error(fail_msg);

    write_sweep_csv((dir / "sweep.csv").string(), rows);

    // Trend diagnostic (reported, never asserted).
    std::map<int, std::pair<double, int>> by_count;
    for (const SweepRow& r : rows) {
        by_count[r.n_sensors].first += r.fair_data;
        by_count[r.n_sensors].second += 1;
    }
    std::vector<BarEntry> bars;
    double prev = -1.0;
    bool nondecreasing = true;
    for (const auto& [n, acc] : by_count) {
        double mean = acc.first / acc.second;
        if (mean < prev) nondecreasing = false;
        prev = mean;
        std::cout << "n_sensors " << n << " mean fair_data " << format_double(mean) << "\n";
        bars.push_back(BarEntry{std::to_string(n) + " sensors", mean, 0.0});
    }
    for (BarEntry& b : bars) {
        for (const SweepRow& r : rows)
            if (b.label == std::to_string(r.n_sensors) + " sensors")
                b.energy += r.energy / base.seeds.size();
    }
    write_bar_chart_svg((dir / "sweep_fair_data.svg").string(), bars);
    std::cout << "fair data trend nondecreasing in sensor count: " << (nondecreasing ? "yes" : "no")
              << "\n";
    std::cout << "sweep complete: " << dir.string() << "\n";
    return 0;
}

int cmd_plot(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    if (run_dirs.empty()) throw ConfigError("plot: at least one run directory required");
    fs::path out(out_dir.empty() ? run_dirs.front() : out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);

    std::map<std::string, std::vector<EpisodeRecord>> series;
    std::vector<BarEntry> bars;
    for (const std::string& rd : run_dirs) {
        fs::path dir(rd);
        if (!fs::exists(dir / "config.json"))
            throw IoError("io: no config.json in " + rd);
        RunConfig cfg = load_run_config((dir / "config.json").string());
        std::string label = cfg.algorithm + ":" + dir.filename().string();

        std::vector<EpisodeRecord> merged;
        for (uint64_t seed : cfg.seeds) {
            fs::path mp = dir / ("metrics_seed" + std::to_string(seed) + ".csv");
            if (!fs::exists(mp)) continue;
            std::vector<EpisodeRecord> recs = read_metrics_csv(mp.string());
            if (merged.empty()) {
                merged = recs;
            } else {
                for (size_t i = 0; i < merged.size() && i < recs.size(); ++i) {
                    merged[i].ret += recs[i].ret;
                    merged[i].fair_data_cum_bits += recs[i].fair_data_cum_bits;
                    merged[i].energy_j += recs[i].energy_j;
                }
            }
        }
        if (merged.empty()) throw IoError("io: no metrics CSVs in " + rd);
        double n_seeds = 0;
        for (uint64_t seed : cfg.seeds)
            if (fs::exists(dir / ("metrics_seed" + std::to_string(seed) + ".csv"))) n_seeds += 1;
        for (EpisodeRecord& r : merged) {
            r.ret /= n_seeds;
            r.fair_data_cum_bits /= n_seeds;
            r.energy_j /= n_seeds;
        }
        series[label] = merged;

        Summary s = summarize(merged);
        bars.push_back(BarEntry{label, s.mean_fair, s.mean_energy});

        // One trajectory figure per run (first seed's trace).
        fs::path tp = dir / ("trajectory_seed" + std::to_string(cfg.seeds.front()) + ".csv");
        if (fs::exists(tp)) {
            std::vector<TraceRow> trace = read_trajectory_csv(tp.string());
            Environment env(cfg.env, cfg.seeds.front());
            env.reset();
            std::vector<core::Vec3> sensors;
            for (const BlsNode& sn : env.state().sensors) sensors.push_back(sn.position);
            write_trajectory_svg((out / ("trajectory_" + dir.filename().string() + ".svg")).string(),
                                 trace, sensors, cfg.env);
        }
    }
    write_learning_curve_svg((out / "learning_curve.svg").string(), series);
    write_bar_chart_svg((out / "fair_data_energy.svg").string(), bars);
    std::cout << "plots written to " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV wireless-power data-collection lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, algo, ablate, checkpoint;
    std::vector<uint64_t> seeds;
    std::vector<int> sensor_counts;
    int episodes = -1;
    int n_sensors = -1;
    bool force = false;
    std::vector<std::string> run_dirs;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (JSON)");
        sub->add_option("--seed", seeds, "seed(s), overrides config");
        sub->add_option("--episodes", episodes, "episode count, overrides config");
        sub->add_option("--out", out_dir, "output directory, overrides config");
        sub->add_option("--algo", algo, "sacppv | sac | random | greedy");
        sub->add_option("--ablate", ablate, "comma list of pfam,per,vrc to disable");
        sub->add_flag("--force", force, "overwrite an existing output directory");
    };

    CLI::App* train = app.add_subcommand("train", "train or roll out one algorithm");
    add_common(train);
    train->add_option("--sensors", n_sensors, "sensor count override");

    CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint deterministically");
    add_common(eval);
    eval->add_option("--checkpoint", checkpoint, "checkpoint file");
    eval->add_option("--sensors", n_sensors, "sensor count override");

    CLI::App* sweep = app.add_subcommand("sweep", "sensor-count sweep");
    add_common(sweep);
    sweep->add_option("--sensors", sensor_counts, "sensor counts to sweep")->required();

    CLI::App* plot = app.add_subcommand("plot", "emit SVG figures from run directories");
    plot->add_option("dirs", run_dirs, "run directories")->required();
    plot->add_option("--out", out_dir, "directory for SVG output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plot->parsed()) return cmd_plot(run_dirs, out_dir);

        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (!seeds.empty()) cfg.seeds = seeds;
        if (episodes >= 0) cfg.episodes = episodes;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!algo.empty()) cfg.algorithm = algo;
        if (n_sensors > 0) cfg.env.n_sensors = n_sensors;
        apply_algorithm(cfg);
        if (!ablate.empty()) apply_ablations(cfg.agent, ablate);
        cfg.validate();

        if (train->parsed()) return cmd_train(cfg, force);
        if (eval->parsed()) return cmd_eval(cfg, checkpoint, force);
        if (sweep->parsed()) return cmd_sweep(cfg, sensor_counts, force);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::string what = e.what();
        if (what.rfind("io:", 0) == 0) {
            std::cerr << "io error: " << what << "\n";
            return kExitIo;
        }
        std::cerr << "numeric failure: " << what << "\n";
        return kExitNumeric;
    }
    return 0;
}
