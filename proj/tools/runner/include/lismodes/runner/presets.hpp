#pragma once

#include "lismodes/runner/config.hpp"

#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lismodes::runner {

/// Fraunhofer boundary 2 D^2 / lambda over a frequency grid for several sizes.
struct FraunhoferTable {
  std::vector<double> sizes_m;
  std::vector<double> frequencies_hz;
};

struct Preset {
  std::string name;
  std::string summary;
  std::variant<ExperimentConfig, FraunhoferTable> job;
};

std::vector<std::string> preset_names();

/// Throws Error(config) listing the known names when `name` is unknown.
Preset make_preset(std::string_view name);

void write_fraunhofer_table(const FraunhoferTable& table, std::ostream& out);

}  // namespace lismodes::runner
