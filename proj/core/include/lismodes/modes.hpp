#pragma once

#include "lismodes/emkernel.hpp"
#include "lismodes/geometry.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace lismodes {

enum class SvdMethod { exact, randomized };

struct SvdOptions {
  SvdMethod method = SvdMethod::exact;
  std::size_t k_max = 256;
  std::uint64_t seed = 0;
  std::size_t oversampling = 10;
  std::size_t power_iterations = 2;
  bool with_vectors = false;
};

/// Communication modes of a coupling operator: descending singular values
/// (coupling coefficients xi_n, intensities sigma_n^2) and, optionally, the
/// paired transmit (right) and receive (left) singular vectors.
struct ModeSpectrum {
  std::vector<double> sigmas;
  std::optional<Eigen::MatrixXcd> tx_modes;  // M_T x k
  std::optional<Eigen::MatrixXcd> rx_modes;  // M_R x k
  std::size_t full_rank = 0;                 // min(M_R, M_T) of the source
  double source_frobenius2 = 0.0;

  std::size_t size() const noexcept { return sigmas.size(); }
  bool empty() const noexcept { return sigmas.empty(); }
  /// Every singular value of the source is present.
  bool complete() const noexcept { return !sigmas.empty() && sigmas.size() == full_rank; }
  double energy() const;
  /// 10 log10(sigma_n^2 / sigma_1^2); -inf for exact zeros.
  std::vector<double> intensities_db_rel() const;
};

/// Top min(k_max, rank) singular triplets. The exact route is deterministic
/// (Householder QR for strongly rectangular inputs, then divide-and-conquer
/// SVD). The randomized route is a seeded range finder with power iterations.
ModeSpectrum mode_spectrum(const Eigen::MatrixXcd& matrix, const SvdOptions& options = {});
ModeSpectrum mode_spectrum(const CouplingMatrix& matrix, const SvdOptions& options = {});

ModeSpectrum exact_spectrum(const Eigen::MatrixXcd& matrix, std::size_t k_max, bool with_vectors);
ModeSpectrum randomized_spectrum(const Eigen::MatrixXcd& matrix, const SvdOptions& options);

/// How the effective number of modes is read off a spectrum.
///
/// relative: N = #{n : sigma_n^2 >= sigma_1^2 10^(-threshold_db/10)}.
/// knee: N = index of the first drop of at least `knee_min_drop_db` between
/// consecutive intensities that both lie within `knee_window_db` of sigma_1^2;
/// when no such drop exists (or fewer than three values are available) the
/// relative rule with `threshold_db` decides.
struct CountRule {
  enum class Kind { knee, relative };

  Kind kind = Kind::knee;
  double threshold_db = 3.0;
  double knee_window_db = 30.0;
  double knee_min_drop_db = 10.0;

  static CountRule knee() { return {}; }
  static CountRule relative(double threshold_db) {
    CountRule rule;
    rule.kind = Kind::relative;
    rule.threshold_db = threshold_db;
    return rule;
  }
};

/// Always at least 1. Throws invalid-argument on an empty spectrum.
std::size_t count_modes(std::span<const double> sigmas, const CountRule& rule = CountRule::knee());
std::size_t count_modes(const ModeSpectrum& spectrum, const CountRule& rule = CountRule::knee());

/// Small-aperture (paraxial) estimate A_T A_R / (lambda d)^2, unrounded.
double n_paraxial(double area_tx, double area_rx, const Wave& wave, double distance);

/// Large-surface limit pi A_T / lambda^2 (parallel and perpendicular).
double n_limit_parallel(double area_tx, const Wave& wave);

/// CSV with columns n, sigma, sigma2_db_rel.
void write_spectrum_csv(std::ostream& out, const ModeSpectrum& spectrum);

}  // namespace lismodes
