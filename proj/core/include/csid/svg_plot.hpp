#pragma once

#include <string>
#include <vector>

#include "csid/csv.hpp"

namespace csid {

enum class PlotKind { distortion_vs_noise, convergence_curve, distortion_vs_k, iterations_bar };

PlotKind plot_kind_from_string(const std::string& name);
std::string to_string(PlotKind kind);

// Self-contained SVG renderings of already-computed tables; no new
// computation happens here and identical inputs give identical bytes.
// Distortion axes are logarithmic.
std::string render_plot(const ResultTable& table, PlotKind kind);
std::string render_convergence_plot(const std::vector<TrajectoryTable>& trajectories);

void emit_plot(const ResultTable& table, PlotKind kind, const std::string& path);
void emit_plot(const std::vector<TrajectoryTable>& trajectories, const std::string& path);

}  // namespace csid
