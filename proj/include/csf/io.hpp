#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "csf/geometry.hpp"
#include "csf/grid.hpp"
#include "csf/measures.hpp"
#include "csf/report.hpp"
#include "csf/trajectory.hpp"

namespace csf::io {

std::string fmt17(double v);  // 17 significant digits, locale-free

// CSV with header "x,u", one row per node.
void write_field_csv(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_field_csv(const std::filesystem::path& path);

// CSV with header "x,y", one row per vertex.
void write_polyline_csv(const Polyline& p, const std::filesystem::path& path);

// One CSV per snapshot plus an index {times:[...], files:[...], meta:{...}}.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                      const std::string& basename);

nlohmann::json report_to_json(const EstimateReport& r);

measures::RadonMeasureSpec read_measure_spec(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir);

}  // namespace csf::io
