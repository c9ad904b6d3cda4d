#include "lismodes/runner/presets.hpp"

#include "lismodes/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <utility>

namespace lismodes::runner {

namespace {

std::vector<double> log_grid(double start, double stop, std::size_t points) {
  std::vector<double> out;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(start * std::pow(stop / start, t));
  }
  out.back() = stop;
  return out;
}

// Shared fig3/fig4 setup: 5 cm x 5 cm transmitter, 0.0625 m^2 receiver, d^2/A_R
// over four decades (approximate axis range).
ExperimentConfig desk_link(std::string name, double frequency_hz, double aspect, Orientation o) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.frequency_hz = frequency_hz;
  c.tx_len_u = 0.05;
  c.tx_len_v = 0.05;
  c.rx_areas = {0.0625};
  c.rx_aspect_ratio = aspect;
  c.orientation = o;
  c.distance_axis = DistanceAxis::d2_over_ar;
  c.distances = log_grid(1e-2, 1e2, 13);
  return c;
}

ExperimentConfig gain_table(std::string name, double aspect) {
  ExperimentConfig c = desk_link(std::move(name), 28e9, aspect, Orientation::parallel);
  c.analysis = Analysis::gain;
  c.distances = log_grid(1e-2, 1e2, 41);
  return c;
}

ExperimentConfig high_band(std::string name, double aspect) {
  ExperimentConfig c = desk_link(std::move(name), 60e9, aspect, Orientation::parallel);
  c.mesh_lambda_frac = 0.5;
  return c;
}

struct Entry {
  const char* name;
  const char* summary;
  std::function<std::variant<ExperimentConfig, FraunhoferTable>()> make;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"fig1", "Fraunhofer distance 2D^2/lambda, 3-300 GHz, D in {0.1, 0.5, 1} m",
       [] { return FraunhoferTable{{0.1, 0.5, 1.0}, log_grid(3e9, 300e9, 41)}; }},
      {"fig3-28ghz-parallel-square", "mode count vs d^2/A_R, 28 GHz, parallel squares",
       [] { return desk_link("fig3-28ghz-parallel-square", 28e9, 1.0, Orientation::parallel); }},
      {"fig3-28ghz-parallel-rect", "mode count vs d^2/A_R, 28 GHz, parallel 4:1 receiver",
       [] { return desk_link("fig3-28ghz-parallel-rect", 28e9, 4.0, Orientation::parallel); }},
      {"fig3-28ghz-perpendicular-square", "mode count vs d^2/A_R, 28 GHz, perpendicular squares",
       [] {
         return desk_link("fig3-28ghz-perpendicular-square", 28e9, 1.0, Orientation::perpendicular);
       }},
      {"fig3-60ghz-parallel-square", "mode count vs d^2/A_R, 60 GHz, parallel squares, lambda/2 mesh",
       [] { return high_band("fig3-60ghz-parallel-square", 1.0); }},
      {"fig3-60ghz-parallel-rect", "mode count vs d^2/A_R, 60 GHz, parallel 4:1 receiver, lambda/2 mesh",
       [] { return high_band("fig3-60ghz-parallel-rect", 4.0); }},
      {"fig4", "exact vs Friis gain vs d^2/A_R, broadside square receiver",
       [] { return gain_table("fig4", 1.0); }},
      {"fig4-rect", "exact vs Friis gain vs d^2/A_R, broadside 4:1 receiver",
       [] { return gain_table("fig4-rect", 4.0); }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.name);
  return out;
}

Preset make_preset(std::string_view name) {
  for (const auto& e : registry()) {
    if (name == e.name) return {e.name, e.summary, e.make()};
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::config, fmt::format("unknown preset \"{}\"; known presets: {}", name, known));
}

void write_fraunhofer_table(const FraunhoferTable& table, std::ostream& out) {
  out << "D_m,frequency_hz,wavelength_m,fraunhofer_m\n";
  for (double size : table.sizes_m) {
    for (double f : table.frequencies_hz) {
      const Wave w = Wave::from_frequency(f);
      out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g}\n", size, f, w.wavelength(),
                         fraunhofer_distance(size, w));
    }
  }
  out << std::flush;
}

}  // namespace lismodes::runner
