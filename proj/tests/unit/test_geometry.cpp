#include "lismodes/errors.hpp"
#include "lismodes/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lismodes;

namespace {

constexpr double lambda_28ghz = speed_of_light / 28e9;

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec3 axis(n(rng), n(rng), n(rng));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  return axis_rotation(axis, angle(rng));
}

}  // namespace

TEST(Wave, WavelengthAndWavenumberAreConsistent) {
  const Wave w = Wave::from_frequency(28e9);
  EXPECT_NEAR(w.wavelength(), 0.0107068735, 1e-10);
  EXPECT_NEAR(w.wavenumber() * w.wavelength() / (2.0 * std::numbers::pi), 1.0, 1e-12);
  EXPECT_THROW(Wave::from_frequency(0.0), Error);
  EXPECT_THROW(Wave::from_frequency(-1.0), Error);
}

TEST(Surface, RejectsNonOrthonormalBasis) {
  EXPECT_THROW(Surface(Vec3::Zero(), Vec3(1, 0, 0), Vec3(1e-9, 1, 0), 1, 1), Error);
  EXPECT_THROW(Surface(Vec3::Zero(), Vec3(2, 0, 0), Vec3(0, 1, 0), 1, 1), Error);
  EXPECT_THROW(Surface::axis_aligned(Vec3::Zero(), 0.0, 1.0), Error);
  EXPECT_THROW(Surface::axis_aligned(Vec3::Zero(), 1.0, -1.0), Error);
}

TEST(Surface, NormalCompletesRightHandedFrame) {
  const Surface s = Surface::axis_aligned(Vec3(1, 2, 3), 0.4, 0.1);
  EXPECT_TRUE(s.normal().isApprox(Vec3::UnitZ()));
  EXPECT_DOUBLE_EQ(s.area(), 0.04);
  EXPECT_DOUBLE_EQ(s.size(), 0.4);
}

TEST(BuildMesh, FiveCentimetreSquareAtQuarterWavelength) {
  const Surface s = Surface::axis_aligned(Vec3::Zero(), 0.05, 0.05);
  const Mesh m = build_mesh(s, lambda_28ghz / 4.0);
  EXPECT_EQ(m.n_u, 19u);
  EXPECT_EQ(m.n_v, 19u);
  ASSERT_EQ(m.size(), 361u);
  const double w = (0.05 / 19.0) * (0.05 / 19.0);
  for (double wi : m.weights) EXPECT_DOUBLE_EQ(wi, w);
  EXPECT_NEAR(m.total_weight(), 0.0025, 1e-9 * 0.0025);
  EXPECT_LE(m.spacing, lambda_28ghz / 4.0);
}

TEST(BuildMesh, SingleCellAtCenter) {
  const Surface s = Surface::axis_aligned(Vec3(0.5, -0.5, 2.0), 1.0, 1.0);
  const Mesh m = build_mesh(s, 1.0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_TRUE(m.points[0].isApprox(s.center()));
  EXPECT_DOUBLE_EQ(m.weights[0], 1.0);
}

TEST(BuildMesh, RowMajorOverUThenV) {
  const Surface s = Surface::axis_aligned(Vec3::Zero(), 0.3, 0.2);
  const Mesh m = build_mesh(s, 0.1);
  ASSERT_EQ(m.n_u, 3u);
  ASSERT_EQ(m.n_v, 2u);
  EXPECT_NEAR(m.points[0].x(), -0.1, 1e-15);
  EXPECT_NEAR(m.points[0].y(), -0.05, 1e-15);
  EXPECT_NEAR(m.points[1].x(), -0.1, 1e-15);
  EXPECT_NEAR(m.points[1].y(), 0.05, 1e-15);
  EXPECT_NEAR(m.points[2].x(), 0.0, 1e-15);
}

TEST(BuildMesh, RejectsNonPositiveSpacing) {
  const Surface s = Surface::axis_aligned(Vec3::Zero(), 1.0, 1.0);
  try {
    build_mesh(s, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
  EXPECT_THROW(build_mesh(s, -0.1), Error);
}

TEST(BuildMesh, AreaPartitionAndPlanarityOnRandomSurfaces) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(0.01, 0.3);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Surface base = Surface::axis_aligned(Vec3::Zero(), len(rng), len(rng));
    const Surface s = transform(base, random_rotation(rng), Vec3(pos(rng), pos(rng), pos(rng)));
    const double target = len(rng) / 7.0;
    const Mesh m = build_mesh(s, target);
    EXPECT_NEAR(m.total_weight(), s.area(), 1e-9 * s.area());
    EXPECT_LE(m.spacing, target);
    for (const Vec3& p : m.points) EXPECT_LE(std::abs(s.to_local(p).z()), 1e-12);
    EXPECT_EQ(m.size(), mesh_point_count(s, target));
  }
}

TEST(BuildMesh, HalvingSpacingNearlyDoublesCounts) {
  // ceil(2x) can fall one short of 2 ceil(x)
  const Surface s = Surface::axis_aligned(Vec3::Zero(), 0.05, 0.13);
  for (double h : {0.02, 0.011, 0.005, 0.0031}) {
    const Mesh coarse = build_mesh(s, h);
    const Mesh fine = build_mesh(s, h / 2.0);
    EXPECT_GE(fine.n_u, 2 * coarse.n_u - 1);
    EXPECT_GE(fine.n_v, 2 * coarse.n_v - 1);
    EXPECT_NEAR(fine.total_weight(), coarse.total_weight(), 1e-12);
  }
  const Mesh coarse = build_mesh(s, 0.05 / 3.0);
  const Mesh fine = build_mesh(s, 0.05 / 6.0);
  EXPECT_EQ(fine.n_u, 2 * coarse.n_u);
}

TEST(Transform, IdentityLeavesSurfaceUnchanged) {
  const Surface s = Surface::axis_aligned(Vec3(0.1, 0.2, 0.3), 0.2, 0.4);
  const Surface t = transform(s, Mat3::Identity(), Vec3::Zero());
  EXPECT_EQ(t.center(), s.center());
  EXPECT_EQ(t.normal(), s.normal());
  EXPECT_EQ(t.len_u(), s.len_u());
}

TEST(Transform, QuarterTurnAboutU) {
  const Surface s = Surface::axis_aligned(Vec3::Zero(), 0.2, 0.4);
  const Surface t = transform(s, axis_rotation(s.basis_u(), std::numbers::pi / 2), Vec3::Zero());
  // right-hand rule about +u: v -> +n, n -> -v
  EXPECT_NEAR((t.normal() + s.basis_v()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.basis_v() - s.normal()).norm(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(t.len_u(), 0.2);
  EXPECT_DOUBLE_EQ(t.len_v(), 0.4);
}

TEST(Transform, RejectsImproperRotations) {
  const Surface s = Surface::axis_aligned(Vec3::Zero(), 1, 1);
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_THROW(transform(s, reflection, Vec3::Zero()), Error);
  EXPECT_THROW(transform(s, 1.001 * Mat3::Identity(), Vec3::Zero()), Error);
}

TEST(Transform, PreservesAreaAndPairwiseDistances) {
  std::mt19937_64 rng(3);
  const Surface s = Surface::axis_aligned(Vec3(0.0, 0.0, 0.5), 0.07, 0.03);
  const Mesh before = build_mesh(s, 0.01);
  for (int trial = 0; trial < 10; ++trial) {
    const Surface t = transform(s, random_rotation(rng), Vec3(0.3, -0.2, 1.1));
    EXPECT_NEAR(t.area(), s.area(), 1e-12);
    const Mesh after = build_mesh(t, 0.01);
    ASSERT_EQ(after.size(), before.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      for (std::size_t j = i + 1; j < before.size(); j += 3) {
        const double d0 = (before.points[i] - before.points[j]).norm();
        const double d1 = (after.points[i] - after.points[j]).norm();
        EXPECT_NEAR(d0, d1, 1e-12);
      }
    }
  }
}

TEST(RotationFromAngles, AppliesXThenY) {
  const Mat3 r = rotation_from_angles(std::numbers::pi / 2, 0.0);
  EXPECT_TRUE((r * Vec3::UnitZ()).isApprox(-Vec3::UnitY()));
  const Mat3 q = rotation_from_angles(0.0, std::numbers::pi / 2);
  EXPECT_TRUE((q * Vec3::UnitZ()).isApprox(Vec3::UnitX()));
}

TEST(Fraunhofer, ReferenceValues) {
  // 2 D^2 / lambda with lambda = c / f
  EXPECT_NEAR(fraunhofer_distance(1.0, Wave::from_frequency(3e9)), 20.01384571188912, 1e-9);
  EXPECT_NEAR(fraunhofer_distance(0.1, Wave::from_frequency(30e9)), 2.001384571188912, 1e-10);
  EXPECT_EQ(fraunhofer_distance(0.0, Wave::from_frequency(30e9)), 0.0);
  EXPECT_THROW(fraunhofer_distance(-1.0, Wave::from_frequency(30e9)), Error);
}

TEST(Fraunhofer, MonotoneInSizeAndFrequency) {
  double prev_f = 0.0;
  for (double f = 1e9; f < 400e9; f *= 1.3) {
    double prev_d = -1.0;
    for (double d = 0.0; d < 2.0; d += 0.1) {
      const double x = fraunhofer_distance(d, Wave::from_frequency(f));
      EXPECT_GT(x, prev_d);
      prev_d = x;
    }
    const double at_1m = fraunhofer_distance(1.0, Wave::from_frequency(f));
    EXPECT_GT(at_1m, prev_f);
    prev_f = at_1m;
  }
}

TEST(SurfacesIntersect, ParallelSeparatedAndPerpendicularCrossing) {
  const Surface tx = Surface::axis_aligned(Vec3::Zero(), 0.05, 0.05);
  EXPECT_FALSE(surfaces_intersect(tx, Surface::axis_aligned(Vec3(0, 0, 0.1), 1.0, 1.0)));
  EXPECT_TRUE(surfaces_intersect(tx, Surface::axis_aligned(Vec3(0.02, 0.0, 0.0), 0.05, 0.05)));
  EXPECT_FALSE(surfaces_intersect(tx, Surface::axis_aligned(Vec3(0.2, 0.0, 0.0), 0.05, 0.05)));

  // perpendicular surface in the y = 0 plane, centered on the tx axis
  const auto perpendicular = [](double d, double side) {
    return Surface(Vec3(0, 0, d), Vec3::UnitX(), Vec3::UnitZ(), side, side);
  };
  EXPECT_FALSE(surfaces_intersect(tx, perpendicular(0.05, 0.05)));
  EXPECT_TRUE(surfaces_intersect(tx, perpendicular(0.1, 0.5)));
  EXPECT_TRUE(surfaces_intersect(tx, perpendicular(0.025, 0.05)));  // edge touches
}
