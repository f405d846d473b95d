#pragma once

#include <string>
#include <vector>

#include "lwpt/env.hpp"
#include "lwpt/trainer.hpp"

namespace lwpt {

// CSV emission. Every file starts with a schema line so readers can detect
// format drift; doubles use %.17g so byte identity matches value identity.

inline constexpr const char* kMetricsSchema = "# lwpt-metrics-v1";
inline constexpr const char* kTrajectorySchema = "# lwpt-trajectory-v1";
inline constexpr const char* kSweepSchema = "# lwpt-sweep-v1";

std::string format_double(double v);

void write_metrics_csv(const std::string& path, const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> read_metrics_csv(const std::string& path);

void write_trajectory_csv(const std::string& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trajectory_csv(const std::string& path);

struct SweepRow {
    int n_sensors = 0;
    uint64_t seed = 0;
    std::string algorithm;
    double reward = 0.0;
    double fair_data = 0.0;
    double energy = 0.0;
};

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace lwpt
