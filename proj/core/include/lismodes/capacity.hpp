#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lismodes {

/// Power split over parallel channels y_n = xi_n x_n + w_n with intensities
/// gains_n = |xi_n|^2 and noise power N_0 per channel.
struct Allocation {
  std::vector<double> gains;
  double noise = 0.0;
  double total_power = 0.0;
  std::vector<double> powers;
  double water_level = 0.0;

  std::size_t active_count() const;
};

/// Capacity-optimal waterfilling. Channels are sorted by their floor
/// N_0/gain and active sets are tried in order, so the water level is exact
/// rather than iterated. Powers are returned in the input order.
Allocation waterfill(std::span<const double> gains, double noise, double total_power);

/// sum log2(1 + p_n g_n / N_0), bits per channel use.
double capacity(const Allocation& allocation);
double capacity(std::span<const double> gains, std::span<const double> powers, double noise);

}  // namespace lismodes
