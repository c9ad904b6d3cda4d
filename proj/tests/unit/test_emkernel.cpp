#include "lismodes/emkernel.hpp"
#include "lismodes/errors.hpp"
#include "lismodes/geometry.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace lismodes;

namespace {

const Wave wave28 = Wave::from_frequency(28e9);

Mesh square_mesh(const Vec3& center, double side, double spacing) {
  return build_mesh(Surface::axis_aligned(center, side, side), spacing);
}

}  // namespace

TEST(GreenScalar, FullAndHalfCyclePhases) {
  const double lam = wave28.wavelength();
  const Complex full = green_scalar(Vec3(0, 0, lam), Vec3::Zero(), wave28);
  EXPECT_NEAR(full.real(), 1.0 / (4.0 * std::numbers::pi * lam), 1e-12 / lam);
  EXPECT_NEAR(full.imag(), 0.0, 1e-12 / lam);

  const Complex half = green_scalar(Vec3(0, lam / 2, 0), Vec3::Zero(), wave28);
  EXPECT_NEAR(half.real(), -1.0 / (2.0 * std::numbers::pi * lam), 1e-12 / lam);
  EXPECT_NEAR(half.imag(), 0.0, 1e-12 / lam);
}

TEST(GreenScalar, ModulusIsInverseDistance) {
  for (double r : {1e-4, 0.01, 0.37, 2.0, 150.0}) {
    EXPECT_NEAR(std::abs(green_scalar(r, wave28.wavenumber())) * 4.0 * std::numbers::pi * r, 1.0,
                1e-14);
  }
}

TEST(GreenScalar, ZeroDistanceIsSingular) {
  try {
    green_scalar(Vec3(1, 2, 3), Vec3(1, 2, 3), wave28);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_kernel);
  }
}

TEST(Assemble, SinglePointMatchesGreenFunction) {
  Mesh tx;
  tx.points = {Vec3::Zero()};
  tx.weights = {1.0};
  Mesh rx;
  rx.points = {Vec3(0, 0, 0.731)};
  rx.weights = {1.0};
  const CouplingMatrix k = assemble_coupling_matrix(tx, rx, wave28);
  ASSERT_EQ(k.rows(), 1u);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k.entries()(0, 0), green_scalar(0.731, wave28.wavenumber()));
}

TEST(Assemble, SwappingMeshesTransposes) {
  const Mesh a = square_mesh(Vec3::Zero(), 0.03, 0.004);
  const Mesh b = build_mesh(
      transform(Surface::axis_aligned(Vec3::Zero(), 0.05, 0.02), axis_rotation(Vec3(1, 1, 0), 0.4),
                Vec3(0.01, 0.0, 0.08)),
      0.005);
  const auto kab = assemble_coupling_matrix(a, b, wave28).entries();
  const auto kba = assemble_coupling_matrix(b, a, wave28).entries();
  EXPECT_LE((kab - kba.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Assemble, ParallelWorkersAreBitIdentical) {
  const Mesh tx = square_mesh(Vec3::Zero(), 0.05, wave28.wavelength() / 4);
  const Mesh rx = square_mesh(Vec3(0, 0, 0.1), 0.06, wave28.wavelength() / 4);
  const auto serial = assemble_coupling_matrix(tx, rx, wave28).entries();
  for (std::size_t workers : {2u, 3u, 7u}) {
    AssemblyOptions opts;
    opts.workers = workers;
    const auto parallel = assemble_coupling_matrix(tx, rx, wave28, opts).entries();
    EXPECT_TRUE(serial == parallel) << workers << " workers";
  }
}

TEST(Assemble, CoincidentPointsAreSingular) {
  const Mesh a = square_mesh(Vec3::Zero(), 0.04, 0.01);
  try {
    assemble_coupling_matrix(a, a, wave28);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_kernel);
  }
}

TEST(Assemble, MemoryCapNamesRequiredBytes) {
  const Mesh a = square_mesh(Vec3::Zero(), 0.04, 0.01);
  const Mesh b = square_mesh(Vec3(0, 0, 1), 0.04, 0.01);
  AssemblyOptions opts;
  opts.memory_cap_bytes = 100;
  try {
    assemble_coupling_matrix(a, b, wave28, opts);
    FAIL();
  } catch (const ResourceLimitError& e) {
    EXPECT_EQ(e.required_bytes(), 16u * 16u * 16u);
    EXPECT_NE(std::string(e.what()).find("4096"), std::string::npos);
  }
}

TEST(Assemble, EmptyMeshIsRejected) {
  EXPECT_THROW(assemble_coupling_matrix(Mesh{}, square_mesh(Vec3::Zero(), 0.01, 0.01), wave28),
               Error);
}

TEST(Assemble, FarZoneFrobeniusMatchesHilbertSchmidtIntegral) {
  const double lam4 = wave28.wavelength() / 4;
  for (double d : {1.58, 2.0}) {
    const Mesh tx = square_mesh(Vec3::Zero(), 0.05, lam4);
    const Mesh rx = square_mesh(Vec3(0, 0, d), 0.05, lam4);
    const double f2 = assemble_coupling_matrix(tx, rx, wave28).frobenius_norm2();
    const double expected = oracle::far_zone_hilbert_schmidt(0.0025, 0.0025, d);
    EXPECT_NEAR(f2 / expected, 1.0, 0.02) << "d=" << d;
  }
}

TEST(Assemble, RigidMotionLeavesEntriesUnchanged) {
  const Surface tx = Surface::axis_aligned(Vec3::Zero(), 0.05, 0.05);
  const Surface rx(Vec3(0.01, 0, 0.09), Vec3::UnitX(), Vec3::UnitZ(), 0.04, 0.06);
  const double h = wave28.wavelength() / 4;
  const auto k0 = assemble_coupling_matrix(build_mesh(tx, h), build_mesh(rx, h), wave28).entries();

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat3 r = axis_rotation(Vec3(n(rng), n(rng), n(rng)), n(rng));
    const Vec3 t(n(rng), n(rng), n(rng));
    const auto k1 = assemble_coupling_matrix(build_mesh(transform(tx, r, t), h),
                                             build_mesh(transform(rx, r, t), h), wave28)
                        .entries();
    const double diff = (k0 - k1).cwiseAbs().maxCoeff();
    EXPECT_LE(diff, 1e-12);
    EXPECT_LE(diff, 1e-10 * k0.cwiseAbs().maxCoeff());
  }
}

TEST(Assemble, FlippingTimeConventionConjugates) {
  const Mesh tx = square_mesh(Vec3::Zero(), 0.03, 0.003);
  const Mesh rx = square_mesh(Vec3(0.0, 0.01, 0.2), 0.03, 0.003);
  AssemblyOptions phys;
  phys.convention = TimeConvention::physics;
  const auto ke = assemble_coupling_matrix(tx, rx, wave28).entries();
  const auto kp = assemble_coupling_matrix(tx, rx, wave28, phys).entries();
  EXPECT_TRUE(kp == ke.conjugate());
}

TEST(Assemble, FrobeniusConvergesUnderRefinement) {
  const double lam = wave28.wavelength();
  const Surface tx = Surface::axis_aligned(Vec3::Zero(), 10 * lam, 10 * lam);
  const Surface rx = Surface::axis_aligned(Vec3(0, 0, 30 * lam), 10 * lam, 10 * lam);
  const double coarse =
      assemble_coupling_matrix(build_mesh(tx, lam / 2), build_mesh(rx, lam / 2), wave28)
          .frobenius_norm2();
  const double fine =
      assemble_coupling_matrix(build_mesh(tx, lam / 4), build_mesh(rx, lam / 4), wave28)
          .frobenius_norm2();
  EXPECT_LT(std::abs(coarse / fine - 1.0), 0.01);
}

TEST(CouplingDump, LittleEndianLayoutRoundTrips) {
  const Mesh tx = square_mesh(Vec3::Zero(), 0.02, 0.01);
  const Mesh rx = square_mesh(Vec3(0, 0, 0.1), 0.03, 0.01);
  const CouplingMatrix k = assemble_coupling_matrix(tx, rx, wave28);
  std::stringstream buf;
  write_coupling_matrix(buf, k);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 16u + k.rows() * k.cols() * 8u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[0]), k.rows());
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), k.cols());
  const Eigen::MatrixXcf back = read_coupling_matrix_dump(buf);
  EXPECT_LE((back.cast<std::complex<double>>() - k.entries()).cwiseAbs().maxCoeff(),
            1e-6 * k.entries().cwiseAbs().maxCoeff());
  std::stringstream truncated(bytes.substr(0, 20));
  EXPECT_THROW(read_coupling_matrix_dump(truncated), Error);
}
