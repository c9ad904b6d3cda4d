#pragma once

#include "lismodes/geometry.hpp"
#include "lismodes/modes.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lismodes::runner {

inline constexpr int schema_version = 1;

enum class Orientation { parallel, perpendicular };
enum class DistanceAxis { meters, d2_over_ar };
enum class Analysis { full, gain };

struct ExperimentConfig {
  std::string name = "experiment";
  double frequency_hz = 28e9;

  Vec3 tx_center = Vec3::Zero();
  double tx_angle_x_deg = 0.0;
  double tx_angle_y_deg = 0.0;
  double tx_len_u = 0.05;
  double tx_len_v = 0.05;
  bool polarization_along_v = false;

  std::vector<double> rx_areas = {0.0625};
  double rx_aspect_ratio = 1.0;  // len_v / len_u
  Orientation orientation = Orientation::parallel;

  DistanceAxis distance_axis = DistanceAxis::d2_over_ar;
  std::vector<double> distances = {1.0};

  std::optional<double> mesh_lambda_frac;  // unset: automatic
  CountRule counting;
  SvdOptions svd;
  double quad_tol = 1e-9;

  bool relative_gains = true;
  double noise = 1.0;
  double total_power = 100.0;

  std::size_t top_k = 8;
  std::size_t workers = 1;
  std::size_t memory_cap_bytes = std::size_t{2} << 30;
  Analysis analysis = Analysis::full;
  std::optional<std::string> output;

  Wave wave() const { return Wave::from_frequency(frequency_hz); }
  Surface tx_surface() const;
  std::size_t point_count() const { return rx_areas.size() * distances.size(); }
};

/// Parses a JSON experiment description. Syntax errors report line and
/// column, semantic errors the offending field path; both throw Error(config).
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks the invariants parse_config enforces, for configs built in code.
void validate(const ExperimentConfig& config);

std::string to_string(Orientation o);

}  // namespace lismodes::runner
