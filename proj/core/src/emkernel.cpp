#include "lismodes/emkernel.hpp"

#include "lismodes/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <istream>
#include <numbers>
#include <ostream>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace lismodes {

namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

// scale * e^{phase_sign j k R} / (4 pi R); the single expression behind every kernel value
inline Complex kernel_value(double distance, double signed_wavenumber, double scale) {
  const double amp = scale / (four_pi * distance);
  const double phase = signed_wavenumber * distance;
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

inline double signed_wavenumber(double wavenumber, TimeConvention convention) {
  return convention == TimeConvention::engineering ? -wavenumber : wavenumber;
}

}  // namespace

Complex green_scalar(double distance, double wavenumber, TimeConvention convention) {
  if (!(distance > 0.0)) {
    throw Error(ErrorKind::singular_kernel, "Green function evaluated at zero distance");
  }
  return kernel_value(distance, signed_wavenumber(wavenumber, convention), 1.0);
}

Complex green_scalar(const Vec3& r, const Vec3& s, const Wave& wave, TimeConvention convention) {
  return green_scalar((r - s).norm(), wave.wavenumber(), convention);
}

CouplingMatrix::CouplingMatrix(Eigen::MatrixXcd entries, Wave wave, std::string tx_mesh_id,
                               std::string rx_mesh_id)
    : entries_(std::move(entries)),
      wave_(wave),
      tx_mesh_id_(std::move(tx_mesh_id)),
      rx_mesh_id_(std::move(rx_mesh_id)) {}

std::size_t coupling_matrix_bytes(std::size_t rows, std::size_t cols) noexcept {
  return rows * cols * sizeof(Complex);
}

namespace {

void assemble_rows(const Mesh& tx, const Mesh& rx, double wavenumber, TimeConvention convention,
                   std::size_t row_begin, std::size_t row_end, Eigen::MatrixXcd& out) {
  const std::size_t cols = tx.size();
  std::vector<double> sqrt_wt(cols);
  for (std::size_t n = 0; n < cols; ++n) sqrt_wt[n] = std::sqrt(tx.weights[n]);
  const double kk = signed_wavenumber(wavenumber, convention);

  for (std::size_t m = row_begin; m < row_end; ++m) {
    const Vec3& r = rx.points[m];
    const double sqrt_wr = std::sqrt(rx.weights[m]);
    for (std::size_t n = 0; n < cols; ++n) {
      const double dist = (r - tx.points[n]).norm();
      if (!(dist > 0.0)) {
        throw Error(ErrorKind::singular_kernel,
                    "receive sample " + std::to_string(m) + " coincides with transmit sample " +
                        std::to_string(n));
      }
      out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
          kernel_value(dist, kk, sqrt_wr * sqrt_wt[n]);
    }
  }
}

}  // namespace

CouplingMatrix assemble_coupling_matrix(const Mesh& mesh_tx, const Mesh& mesh_rx,
                                        const Wave& wave, const AssemblyOptions& options) {
  if (mesh_tx.size() == 0 || mesh_rx.size() == 0) {
    throw Error(ErrorKind::invalid_argument, "coupling matrix needs non-empty meshes");
  }
  const std::size_t rows = mesh_rx.size();
  const std::size_t cols = mesh_tx.size();
  const std::size_t bytes = coupling_matrix_bytes(rows, cols);
  if (bytes > options.memory_cap_bytes) {
    throw ResourceLimitError(bytes, options.memory_cap_bytes);
  }

  Eigen::MatrixXcd entries(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, rows);
  const double k = wave.wavenumber();

  if (workers == 1) {
    assemble_rows(mesh_tx, mesh_rx, k, options.convention, 0, rows, entries);
  } else {
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (rows + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(rows, w * block);
      const std::size_t end = std::min(rows, begin + block);
      pool.emplace_back([&, w, begin, end] {
        try {
          assemble_rows(mesh_tx, mesh_rx, k, options.convention, begin, end, entries);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  return CouplingMatrix(std::move(entries), wave, mesh_tx.id, mesh_rx.id);
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  auto bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> buf{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(U)> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw Error(ErrorKind::invalid_input, "truncated coupling matrix dump");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(buf[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_coupling_matrix(std::ostream& out, const CouplingMatrix& matrix) {
  const auto& k = matrix.entries();
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(k.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(k.cols()));
  for (Eigen::Index m = 0; m < k.rows(); ++m) {
    for (Eigen::Index n = 0; n < k.cols(); ++n) {
      put_le<float>(out, static_cast<float>(k(m, n).real()));
      put_le<float>(out, static_cast<float>(k(m, n).imag()));
    }
  }
}

Eigen::MatrixXcf read_coupling_matrix_dump(std::istream& in) {
  const auto rows = get_le<std::uint64_t>(in);
  const auto cols = get_le<std::uint64_t>(in);
  Eigen::MatrixXcf k(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index m = 0; m < k.rows(); ++m) {
    for (Eigen::Index n = 0; n < k.cols(); ++n) {
      const float re = get_le<float>(in);
      const float im = get_le<float>(in);
      k(m, n) = {re, im};
    }
  }
  return k;
}

}  // namespace lismodes
