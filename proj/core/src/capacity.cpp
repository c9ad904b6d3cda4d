#include "lismodes/capacity.hpp"

#include "lismodes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lismodes {

std::size_t Allocation::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(powers.begin(), powers.end(), [](double p) { return p > 0.0; }));
}

Allocation waterfill(std::span<const double> gains, double noise, double total_power) {
  if (gains.empty()) throw Error(ErrorKind::invalid_argument, "waterfilling needs at least one channel");
  if (!std::isfinite(noise) || !std::isfinite(total_power) ||
      std::any_of(gains.begin(), gains.end(), [](double g) { return !std::isfinite(g); })) {
    throw Error(ErrorKind::invalid_input, "waterfilling inputs must be finite");
  }
  if (!(noise > 0.0) || !(total_power > 0.0) ||
      std::any_of(gains.begin(), gains.end(), [](double g) { return !(g > 0.0); })) {
    throw Error(ErrorKind::invalid_argument, "gains, noise and total power must be positive");
  }

  const std::size_t n = gains.size();
  std::vector<double> floors(n);
  for (std::size_t i = 0; i < n; ++i) floors[i] = noise / gains[i];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return floors[a] < floors[b]; });

  // largest active set whose water level clears its own highest floor
  double level = total_power + floors[order[0]];
  double floor_sum = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    floor_sum += floors[order[m]];
    const double candidate = (total_power + floor_sum) / static_cast<double>(m + 1);
    if (candidate <= floors[order[m]]) break;
    level = candidate;
  }

  Allocation alloc;
  alloc.gains.assign(gains.begin(), gains.end());
  alloc.noise = noise;
  alloc.total_power = total_power;
  alloc.water_level = level;
  alloc.powers.resize(n);
  for (std::size_t i = 0; i < n; ++i) alloc.powers[i] = std::max(0.0, level - floors[i]);
  return alloc;
}

double capacity(std::span<const double> gains, std::span<const double> powers, double noise) {
  if (gains.size() != powers.size()) {
    throw Error(ErrorKind::invalid_argument, "gains and powers differ in length");
  }
  double bits = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) bits += std::log2(1.0 + powers[i] * gains[i] / noise);
  return bits;
}

double capacity(const Allocation& allocation) {
  return capacity(allocation.gains, allocation.powers, allocation.noise);
}

}  // namespace lismodes
