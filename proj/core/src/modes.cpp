#include "lismodes/modes.hpp"

#include "lismodes/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <locale>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace lismodes {

double ModeSpectrum::energy() const {
  return std::accumulate(sigmas.begin(), sigmas.end(), 0.0,
                         [](double acc, double s) { return acc + s * s; });
}

std::vector<double> ModeSpectrum::intensities_db_rel() const {
  std::vector<double> out;
  out.reserve(sigmas.size());
  for (double s : sigmas) {
    out.push_back(sigmas.front() > 0.0 ? 20.0 * std::log10(s / sigmas.front())
                                       : -std::numeric_limits<double>::infinity());
  }
  return out;
}

namespace {

struct Triplets {
  Eigen::VectorXd sigmas;
  Eigen::MatrixXcd left;   // m x r
  Eigen::MatrixXcd right;  // n x r
};

Eigen::MatrixXcd thin_q(const Eigen::HouseholderQR<Eigen::MatrixXcd>& qr) {
  const Eigen::Index m = qr.matrixQR().rows();
  const Eigen::Index n = std::min(qr.matrixQR().rows(), qr.matrixQR().cols());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(m, n);
  q.applyOnTheLeft(qr.householderQ());
  return q;
}

// SVD of a matrix with rows >= cols.
Triplets svd_tall(const Eigen::MatrixXcd& a, bool with_vectors) {
  const unsigned int opts = with_vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Triplets t;
  if (a.rows() >= 2 * a.cols()) {
    // QR first: the bidiagonalisation then runs on the small triangular factor
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    const Eigen::MatrixXcd r =
        qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(r, opts);
    t.sigmas = svd.singularValues();
    if (with_vectors) {
      t.left = thin_q(qr) * svd.matrixU();
      t.right = svd.matrixV();
    }
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, opts);
    t.sigmas = svd.singularValues();
    if (with_vectors) {
      t.left = svd.matrixU();
      t.right = svd.matrixV();
    }
  }
  return t;
}

Triplets svd_any(const Eigen::MatrixXcd& a, bool with_vectors) {
  if (a.rows() >= a.cols()) return svd_tall(a, with_vectors);
  Triplets t = svd_tall(a.adjoint(), with_vectors);
  std::swap(t.left, t.right);
  return t;
}

void check_finite(const Eigen::MatrixXcd& matrix) {
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::invalid_input, "matrix has non-finite entries");
  }
}

ModeSpectrum truncate(const Triplets& t, std::size_t k, bool with_vectors, std::size_t full_rank,
                      double frobenius2) {
  const auto keep = static_cast<Eigen::Index>(std::min<std::size_t>(k, t.sigmas.size()));
  ModeSpectrum spectrum;
  spectrum.sigmas.assign(t.sigmas.data(), t.sigmas.data() + keep);
  // singular values come out sorted; clamp tiny negative rounding to zero
  for (double& s : spectrum.sigmas) s = std::max(s, 0.0);
  if (with_vectors) {
    spectrum.rx_modes = t.left.leftCols(keep);
    spectrum.tx_modes = t.right.leftCols(keep);
  }
  spectrum.full_rank = full_rank;
  spectrum.source_frobenius2 = frobenius2;
  return spectrum;
}

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& y) {
  return thin_q(Eigen::HouseholderQR<Eigen::MatrixXcd>(y));
}

}  // namespace

ModeSpectrum exact_spectrum(const Eigen::MatrixXcd& matrix, std::size_t k_max, bool with_vectors) {
  if (k_max < 1) throw Error(ErrorKind::invalid_argument, "k_max must be at least 1");
  if (matrix.size() == 0) throw Error(ErrorKind::invalid_argument, "empty matrix");
  check_finite(matrix);
  const auto full_rank = static_cast<std::size_t>(std::min(matrix.rows(), matrix.cols()));
  return truncate(svd_any(matrix, with_vectors), k_max, with_vectors, full_rank,
                  matrix.squaredNorm());
}

ModeSpectrum randomized_spectrum(const Eigen::MatrixXcd& matrix, const SvdOptions& options) {
  if (options.k_max < 1) throw Error(ErrorKind::invalid_argument, "k_max must be at least 1");
  if (matrix.size() == 0) throw Error(ErrorKind::invalid_argument, "empty matrix");
  check_finite(matrix);

  const auto full_rank = static_cast<std::size_t>(std::min(matrix.rows(), matrix.cols()));
  const std::size_t sketch = std::min(options.k_max + options.oversampling, full_rank);
  if (sketch >= full_rank) {
    return exact_spectrum(matrix, options.k_max, options.with_vectors);
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto l = static_cast<Eigen::Index>(sketch);
  Eigen::MatrixXcd omega(matrix.cols(), l);
  for (Eigen::Index j = 0; j < l; ++j) {
    for (Eigen::Index i = 0; i < matrix.cols(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      omega(i, j) = {re, im};
    }
  }

  Eigen::MatrixXcd q = orthonormal_basis(matrix * omega);
  for (std::size_t it = 0; it < options.power_iterations; ++it) {
    const Eigen::MatrixXcd z = orthonormal_basis(matrix.adjoint() * q);
    q = orthonormal_basis(matrix * z);
  }

  const Eigen::MatrixXcd b = q.adjoint() * matrix;  // l x n
  Triplets t = svd_any(b, options.with_vectors);
  if (options.with_vectors) t.left = q * t.left;
  return truncate(t, options.k_max, options.with_vectors, full_rank, matrix.squaredNorm());
}

ModeSpectrum mode_spectrum(const Eigen::MatrixXcd& matrix, const SvdOptions& options) {
  if (options.k_max < 1) throw Error(ErrorKind::invalid_argument, "k_max must be at least 1");
  return options.method == SvdMethod::exact
             ? exact_spectrum(matrix, options.k_max, options.with_vectors)
             : randomized_spectrum(matrix, options);
}

ModeSpectrum mode_spectrum(const CouplingMatrix& matrix, const SvdOptions& options) {
  return mode_spectrum(matrix.entries(), options);
}

namespace {

std::size_t count_relative(std::span<const double> sigmas, double threshold_db) {
  const double floor = sigmas.front() * sigmas.front() * std::pow(10.0, -threshold_db / 10.0);
  return static_cast<std::size_t>(
      std::count_if(sigmas.begin(), sigmas.end(), [&](double s) { return s * s >= floor; }));
}

}  // namespace

std::size_t count_modes(std::span<const double> sigmas, const CountRule& rule) {
  if (sigmas.empty()) throw Error(ErrorKind::invalid_argument, "cannot count modes of an empty spectrum");
  if (std::any_of(sigmas.begin(), sigmas.end(), [](double s) { return !(s >= 0.0) || !std::isfinite(s); })) {
    throw Error(ErrorKind::invalid_argument, "singular values must be finite and non-negative");
  }
  if (!std::is_sorted(sigmas.begin(), sigmas.end(), std::greater<>())) {
    throw Error(ErrorKind::invalid_argument, "singular values must be in descending order");
  }
  if (!(sigmas.front() > 0.0)) return 1;

  if (rule.kind == CountRule::Kind::knee && sigmas.size() >= 3) {
    const double s1 = sigmas.front();
    const auto rel_db = [&](std::size_t i) {
      return sigmas[i] > 0.0 ? 20.0 * std::log10(sigmas[i] / s1)
                             : -std::numeric_limits<double>::infinity();
    };
    for (std::size_t n = 0; n + 1 < sigmas.size(); ++n) {
      const double next = rel_db(n + 1);
      if (next < -rule.knee_window_db) break;
      if (rel_db(n) - next >= rule.knee_min_drop_db) return n + 1;
    }
  }
  return std::max<std::size_t>(1, count_relative(sigmas, rule.threshold_db));
}

std::size_t count_modes(const ModeSpectrum& spectrum, const CountRule& rule) {
  return count_modes(std::span<const double>(spectrum.sigmas), rule);
}

double n_paraxial(double area_tx, double area_rx, const Wave& wave, double distance) {
  if (!(distance > 0.0)) throw Error(ErrorKind::invalid_argument, "distance must be positive");
  const double ld = wave.wavelength() * distance;
  return area_tx * area_rx / (ld * ld);
}

double n_limit_parallel(double area_tx, const Wave& wave) {
  if (!(area_tx > 0.0)) throw Error(ErrorKind::invalid_argument, "area must be positive");
  return std::numbers::pi * area_tx / (wave.wavelength() * wave.wavelength());
}

void write_spectrum_csv(std::ostream& out, const ModeSpectrum& spectrum) {
  const std::locale previous = out.imbue(std::locale::classic());
  const auto db = spectrum.intensities_db_rel();
  out << "n,sigma,sigma2_db_rel\n";
  for (std::size_t i = 0; i < spectrum.sigmas.size(); ++i) {
    out << (i + 1) << ',' << std::setprecision(17) << std::defaultfloat << spectrum.sigmas[i]
        << ',' << std::fixed << std::setprecision(3) << db[i] << '\n';
    out << std::defaultfloat;
  }
  out.imbue(previous);
}

}  // namespace lismodes
