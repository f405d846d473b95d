#include "lwpt/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lwpt {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot read " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

void expect_schema(std::ifstream& in, const std::string& want, const std::string& path) {
    std::string line;
    std::getline(in, line);
    if (line != want) throw std::runtime_error(path + ": unexpected schema line '" + line + "'");
    std::getline(in, line);  // header row
}

}  // namespace

void write_metrics_csv(const std::string& path, const std::vector<EpisodeRecord>& records) {
    std::ofstream out = open_out(path);
    out << kMetricsSchema << "\n";
    out << "episode,return,fair_data_slot_bits,fair_data_cum_bits,energy_J,jain_mean,violations,wall_time_s\n";
    for (const EpisodeRecord& r : records) {
        out << r.episode << ',' << format_double(r.ret) << ',' << format_double(r.fair_data_slot_bits)
            << ',' << format_double(r.fair_data_cum_bits) << ',' << format_double(r.energy_j) << ','
            << format_double(r.jain_mean) << ',' << r.violations << ',' << format_double(r.wall_time_s)
            << "\n";
    }
}

std::vector<EpisodeRecord> read_metrics_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    expect_schema(in, kMetricsSchema, path);
    std::vector<EpisodeRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 8) throw std::runtime_error(path + ": malformed row '" + line + "'");
        EpisodeRecord r;
        r.episode = std::stoi(f[0]);
        r.ret = std::stod(f[1]);
        r.fair_data_slot_bits = std::stod(f[2]);
        r.fair_data_cum_bits = std::stod(f[3]);
        r.energy_j = std::stod(f[4]);
        r.jain_mean = std::stod(f[5]);
        r.violations = std::stoi(f[6]);
        r.wall_time_s = std::stod(f[7]);
        out.push_back(r);
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const std::vector<TraceRow>& rows) {
    std::ofstream out = open_out(path);
    out << kTrajectorySchema << "\n";
    out << "t,x_m,y_m,p_tx_W,n_eligible,slot_bits,slot_energy_J,reward\n";
    for (const TraceRow& r : rows) {
        out << r.t << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
            << format_double(r.p_tx) << ',' << r.n_eligible << ',' << format_double(r.slot_bits)
            << ',' << format_double(r.slot_energy_j) << ',' << format_double(r.reward) << "\n";
    }
}

std::vector<TraceRow> read_trajectory_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    expect_schema(in, kTrajectorySchema, path);
    std::vector<TraceRow> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 8) throw std::runtime_error(path + ": malformed row '" + line + "'");
        TraceRow r;
        r.t = std::stoi(f[0]);
        r.x = std::stod(f[1]);
        r.y = std::stod(f[2]);
        r.p_tx = std::stod(f[3]);
        r.n_eligible = std::stoi(f[4]);
        r.slot_bits = std::stod(f[5]);
        r.slot_energy_j = std::stod(f[6]);
        r.reward = std::stod(f[7]);
        out.push_back(r);
    }
    return out;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_out(path);
    out << kSweepSchema << "\n";
    out << "n_sensors,seed,algorithm,reward,fair_data,energy\n";
    for (const SweepRow& r : rows) {
        out << r.n_sensors << ',' << r.seed << ',' << r.algorithm << ',' << format_double(r.reward)
            << ',' << format_double(r.fair_data) << ',' << format_double(r.energy) << "\n";
    }
}

}  // namespace lwpt
