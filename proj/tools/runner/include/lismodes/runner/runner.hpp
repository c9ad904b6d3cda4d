#pragma once

#include "lismodes/runner/config.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lismodes::runner {

struct SweepPoint {
  std::size_t index = 0;
  double area_rx = 0.0;
  double distance = 0.0;  // between surface centers
  double d2_over_ar = 0.0;
};

/// Sweep points in output order: rx area ascending, then distance ascending.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

struct Scene {
  Surface tx;
  Surface rx;
};

/// Places the receiver at `point.distance` along the transmitter normal, either
/// facing it (parallel) or turned a quarter about its u axis (perpendicular).
Scene place(const ExperimentConfig& config, const SweepPoint& point);

struct MeshChoice {
  double spacing = 0.0;
  std::size_t points = 0;
  bool coarsened = false;  // automatic policy fell back to lambda/2
};

inline constexpr std::size_t auto_mesh_point_limit = 5000;

/// Explicit mesh_lambda_frac wins; otherwise lambda/4 while a surface stays
/// within auto_mesh_point_limit samples, lambda/2 beyond.
MeshChoice choose_mesh(const ExperimentConfig& config, const Surface& surface);

struct PointResult {
  SweepPoint point;
  std::optional<std::size_t> n_counted;
  double n_paraxial = 0.0;
  double n_limit = 0.0;
  std::vector<double> sigma2_db_rel;  // top_k leading values
  std::optional<double> gain_exact;
  double gain_friis = 0.0;
  double gain_limit = 0.0;
  std::optional<double> capacity_bits;
  std::string mesh;  // "tx/rx" cell grids
  std::string error;
  std::vector<std::string> warnings;

  bool ok() const { return error.empty(); }
};

/// Evaluates one sweep point. Solver failures are caught and reported in
/// `error` together with the geometry; nothing is thrown for those.
PointResult evaluate(const ExperimentConfig& config, const SweepPoint& point,
                     std::size_t assembly_workers = 1);

std::string csv_header(const ExperimentConfig& config);
std::string csv_row(const ExperimentConfig& config, const PointResult& result);

/// Single-point run; the config must describe exactly one geometry.
PointResult run_link(const ExperimentConfig& config);

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t failed = 0;
};

/// Evaluates every sweep point on `config.workers` threads and writes the CSV
/// in sweep order, flushing after each row.
SweepSummary run_sweep(const ExperimentConfig& config, std::ostream& out);

}  // namespace lismodes::runner
