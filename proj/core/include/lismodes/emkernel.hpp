#pragma once

#include "lismodes/geometry.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>

namespace lismodes {

using Complex = std::complex<double>;

/// Sign of the time-harmonic factor. `engineering` is e^{+jwt}, giving the
/// outgoing kernel e^{-jkR}/(4 pi R); `physics` is e^{-iwt}, its conjugate.
enum class TimeConvention { engineering, physics };

/// Scalar free-space Green function at distance R > 0. Throws singular-kernel
/// when R is zero.
Complex green_scalar(double distance, double wavenumber,
                     TimeConvention convention = TimeConvention::engineering);
Complex green_scalar(const Vec3& r, const Vec3& s, const Wave& wave,
                     TimeConvention convention = TimeConvention::engineering);

struct AssemblyOptions {
  std::size_t workers = 1;
  std::size_t memory_cap_bytes = std::size_t{2} << 30;
  TimeConvention convention = TimeConvention::engineering;
};

/// Discretised transmit-to-receive operator: entry (m, n) couples receive
/// sample m with transmit sample n as g(|r_m - s_n|) sqrt(w_m w_n).
class CouplingMatrix {
 public:
  CouplingMatrix(Eigen::MatrixXcd entries, Wave wave, std::string tx_mesh_id,
                 std::string rx_mesh_id);

  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  const Wave& wave() const noexcept { return wave_; }
  const std::string& tx_mesh_id() const noexcept { return tx_mesh_id_; }
  const std::string& rx_mesh_id() const noexcept { return rx_mesh_id_; }

  std::size_t rows() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  /// Sum of |K_mn|^2; the discrete Hilbert-Schmidt norm squared.
  double frobenius_norm2() const { return entries_.squaredNorm(); }

 private:
  Eigen::MatrixXcd entries_;
  Wave wave_;
  std::string tx_mesh_id_;
  std::string rx_mesh_id_;
};

std::size_t coupling_matrix_bytes(std::size_t rows, std::size_t cols) noexcept;

/// Dense assembly. Rows are split into contiguous blocks across
/// `options.workers` threads; every entry is computed by the same expression,
/// so the result is bit-identical for any worker count.
CouplingMatrix assemble_coupling_matrix(const Mesh& mesh_tx, const Mesh& mesh_rx,
                                        const Wave& wave, const AssemblyOptions& options = {});

/// Debug dump: little-endian u64 rows, u64 cols, then rows*cols row-major
/// (float re, float im) pairs. Not a stability contract.
void write_coupling_matrix(std::ostream& out, const CouplingMatrix& matrix);
Eigen::MatrixXcf read_coupling_matrix_dump(std::istream& in);

}  // namespace lismodes
