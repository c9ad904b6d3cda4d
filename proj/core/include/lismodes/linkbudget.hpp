#pragma once

#include "lismodes/geometry.hpp"
#include "lismodes/modes.hpp"

#include <cstddef>
#include <optional>

namespace lismodes {

/// Upper bound on the isotropic-to-infinite-plane power gain (-4.77 dB).
inline constexpr double gain_saturation_limit = 1.0 / 3.0;

struct GainReport {
  double gain_exact = 0.0;
  double gain_friis = 0.0;
  double gain_limit = gain_saturation_limit;
  double distance = 0.0;  // transmitter to surface center
  double area_rx = 0.0;
  double quadrature_error_estimate = 0.0;  // relative
  std::size_t panels = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  int max_level = 12;
  std::size_t max_panels = 4'000'000;
};

/// Fraction of the power radiated by an isotropic point source with linear
/// polarization `polarization` that crosses `surface`:
///
///   integral over S of |n . r_hat| (1 - (e . r_hat)^2) / (4 pi r^2) dA
///
/// i.e. spherical spreading, projected aperture and polarization mismatch.
/// Evaluated with globally adaptive 2x2 panel subdivision (tensor
/// Gauss-Legendre panels, error from coarse-vs-children difference), with the
/// domain pre-split at the foot of the transmitter.
///
/// Throws geometry when the transmitter lies on the aperture and convergence
/// (carrying the best estimate) when `quad_tol` cannot be met.
GainReport gain_exact(const Surface& surface, const Vec3& tx_pos, const Vec3& polarization,
                      double quad_tol);
GainReport gain_exact(const Surface& surface, const Vec3& tx_pos, const Vec3& polarization,
                      const QuadratureOptions& options);

/// Integrand of gain_exact at a point of the surface.
double gain_density(const Vec3& point, const Vec3& normal, const Vec3& tx_pos,
                    const Vec3& polarization);

/// Far-field Friis gain of an aperture A_R for an isotropic source: A_R/(4 pi d^2).
double gain_friis(double area_rx, double distance);

/// Sum of coupling intensities sum sigma_n^2. This is a relative figure in the
/// scalar-kernel normalization, not the calibrated isotropic gain above. A
/// truncated spectrum needs `tail_energy` (energy of the discarded values),
/// otherwise invalid-use is thrown.
double gain_from_modes(const ModeSpectrum& spectrum, std::optional<double> tail_energy = std::nullopt);

/// Energy of the singular values a truncated spectrum dropped, from the
/// Frobenius norm of its source.
double tail_energy(const ModeSpectrum& spectrum);

}  // namespace lismodes
