#pragma once

#include <map>
#include <string>
#include <vector>

#include "lwpt/config.hpp"
#include "lwpt/env.hpp"
#include "lwpt/metrics.hpp"
#include "lwpt/trainer.hpp"

namespace lwpt {

// Self-contained SVG emitters; no external renderer needed.

// Per-episode return curves, one per labelled series, smoothed with a
// trailing moving average.
void write_learning_curve_svg(const std::string& path,
                              const std::map<std::string, std::vector<EpisodeRecord>>& series,
                              int smooth_window = 50);

// Grouped bars: fair data and energy per algorithm.
struct BarEntry {
    std::string label;
    double fair_data = 0.0;
    double energy = 0.0;
};
void write_bar_chart_svg(const std::string& path, const std::vector<BarEntry>& entries);

// Flight path over the service area with sensor markers.
void write_trajectory_svg(const std::string& path, const std::vector<TraceRow>& trace,
                          const std::vector<core::Vec3>& sensors, const EnvConfig& cfg);

}  // namespace lwpt
