#include "lismodes/geometry.hpp"

#include "lismodes/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace lismodes {

Wave::Wave(double frequency, double wavelength)
    : frequency_(frequency), wavelength_(wavelength), wavenumber_(2.0 * std::numbers::pi / wavelength) {}

Wave Wave::from_frequency(double frequency_hz) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw Error(ErrorKind::invalid_argument, "frequency must be positive and finite");
  }
  return Wave(frequency_hz, speed_of_light / frequency_hz);
}

Wave Wave::from_wavelength(double wavelength_m) {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw Error(ErrorKind::invalid_argument, "wavelength must be positive and finite");
  }
  return Wave(speed_of_light / wavelength_m, wavelength_m);
}

Surface::Surface(const Vec3& center, const Vec3& basis_u, const Vec3& basis_v, double len_u,
                 double len_v)
    : center_(center),
      basis_u_(basis_u),
      basis_v_(basis_v),
      normal_(basis_u.cross(basis_v)),
      len_u_(len_u),
      len_v_(len_v) {
  if (!(len_u > 0.0) || !(len_v > 0.0) || !std::isfinite(len_u) || !std::isfinite(len_v)) {
    throw Error(ErrorKind::invalid_argument, "surface side lengths must be positive");
  }
  if (!center.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "surface center must be finite");
  }
  if (std::abs(basis_u.norm() - 1.0) > frame_tolerance ||
      std::abs(basis_v.norm() - 1.0) > frame_tolerance ||
      std::abs(basis_u.dot(basis_v)) > frame_tolerance) {
    throw Error(ErrorKind::invalid_argument, "surface basis must be orthonormal");
  }
}

Surface Surface::axis_aligned(const Vec3& center, double len_u, double len_v) {
  return Surface(center, Vec3::UnitX(), Vec3::UnitY(), len_u, len_v);
}

Vec3 Surface::to_local(const Vec3& p) const {
  const Vec3 rel = p - center_;
  return {rel.dot(basis_u_), rel.dot(basis_v_), rel.dot(normal_)};
}

bool Surface::contains_local(double u, double v, double slack) const {
  return std::abs(u) <= 0.5 * len_u_ + slack && std::abs(v) <= 0.5 * len_v_ + slack;
}

std::array<Vec3, 4> Surface::corners() const {
  const double hu = 0.5 * len_u_;
  const double hv = 0.5 * len_v_;
  return {point_at(-hu, -hv), point_at(hu, -hv), point_at(hu, hv), point_at(-hu, hv)};
}

double Mesh::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

namespace {

std::size_t cells_along(double length, double target) {
  auto n = static_cast<std::size_t>(std::ceil(length / target));
  n = std::max<std::size_t>(n, 1);
  // ceil of a rounded quotient can overshoot by one when length/target is integral
  if (n > 1 && length / static_cast<double>(n - 1) <= target) --n;
  return n;
}

void check_spacing(double target_spacing) {
  if (!(target_spacing > 0.0) || !std::isfinite(target_spacing)) {
    throw Error(ErrorKind::invalid_argument, "mesh spacing must be positive");
  }
}

}  // namespace

std::size_t mesh_point_count(const Surface& surface, double target_spacing) {
  check_spacing(target_spacing);
  return cells_along(surface.len_u(), target_spacing) *
         cells_along(surface.len_v(), target_spacing);
}

Mesh build_mesh(const Surface& surface, double target_spacing) {
  check_spacing(target_spacing);
  Mesh mesh;
  mesh.n_u = cells_along(surface.len_u(), target_spacing);
  mesh.n_v = cells_along(surface.len_v(), target_spacing);
  const double du = surface.len_u() / static_cast<double>(mesh.n_u);
  const double dv = surface.len_v() / static_cast<double>(mesh.n_v);
  mesh.spacing = std::max(du, dv);
  mesh.id = std::to_string(mesh.n_u) + "x" + std::to_string(mesh.n_v);

  const std::size_t count = mesh.n_u * mesh.n_v;
  mesh.points.reserve(count);
  mesh.weights.assign(count, du * dv);
  for (std::size_t iu = 0; iu < mesh.n_u; ++iu) {
    const double u = -0.5 * surface.len_u() + (static_cast<double>(iu) + 0.5) * du;
    for (std::size_t iv = 0; iv < mesh.n_v; ++iv) {
      const double v = -0.5 * surface.len_v() + (static_cast<double>(iv) + 0.5) * dv;
      mesh.points.push_back(surface.point_at(u, v));
    }
  }
  return mesh;
}

Surface transform(const Surface& surface, const Mat3& rotation, const Vec3& translation) {
  const double orth_err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!rotation.allFinite() || orth_err > 1e-12 || std::abs(rotation.determinant() - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "transform requires a proper orthonormal rotation");
  }
  if (!translation.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "translation must be finite");
  }
  return Surface(rotation * surface.center() + translation, rotation * surface.basis_u(),
                 rotation * surface.basis_v(), surface.len_u(), surface.len_v());
}

Mat3 axis_rotation(const Vec3& axis, double angle_rad) {
  return Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
}

Mat3 rotation_from_angles(double about_x_rad, double about_y_rad) {
  return axis_rotation(Vec3::UnitY(), about_y_rad) * axis_rotation(Vec3::UnitX(), about_x_rad);
}

double fraunhofer_distance(double size, const Wave& wave) {
  if (!(size >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "antenna size must be non-negative");
  }
  return 2.0 * size * size / wave.wavelength();
}

namespace {

// Liang-Barsky clip of the local-plane segment a->b against the rectangle.
bool segment_hits_rect_in_plane(const Surface& s, const Vec3& a, const Vec3& b, double tol) {
  const Vec3 la = s.to_local(a);
  const Vec3 lb = s.to_local(b);
  double t0 = 0.0;
  double t1 = 1.0;
  const double du = lb.x() - la.x();
  const double dv = lb.y() - la.y();
  const double hu = 0.5 * s.len_u() + tol;
  const double hv = 0.5 * s.len_v() + tol;
  const double p[4] = {-du, du, -dv, dv};
  const double q[4] = {la.x() + hu, hu - la.x(), la.y() + hv, hv - la.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

bool edge_hits_rect(const Surface& s, const Vec3& a, const Vec3& b, double tol) {
  const double ha = s.to_local(a).z();
  const double hb = s.to_local(b).z();
  if ((ha > tol && hb > tol) || (ha < -tol && hb < -tol)) return false;
  if (std::abs(ha) <= tol && std::abs(hb) <= tol) return segment_hits_rect_in_plane(s, a, b, tol);
  const double t = ha / (ha - hb);
  const Vec3 hit = s.to_local(a + t * (b - a));
  return s.contains_local(hit.x(), hit.y(), tol);
}

}  // namespace

bool surfaces_intersect(const Surface& a, const Surface& b) {
  const double scale = std::max({a.size(), b.size(), (a.center() - b.center()).norm()});
  const double tol = 1e-12 * scale;

  if (a.normal().cross(b.normal()).norm() <= 1e-12) {
    if (std::abs(a.to_local(b.center()).z()) > tol) return false;
    // coplanar: separating-axis test on both frames
    const auto overlap_on = [&](const Vec3& axis) {
      const auto half_extent = [&](const Surface& s) {
        return 0.5 * s.len_u() * std::abs(s.basis_u().dot(axis)) +
               0.5 * s.len_v() * std::abs(s.basis_v().dot(axis));
      };
      const double gap = std::abs((b.center() - a.center()).dot(axis));
      return gap <= half_extent(a) + half_extent(b) + tol;
    };
    return overlap_on(a.basis_u()) && overlap_on(a.basis_v()) && overlap_on(b.basis_u()) &&
           overlap_on(b.basis_v());
  }

  const auto ca = a.corners();
  const auto cb = b.corners();
  for (std::size_t i = 0; i < 4; ++i) {
    if (edge_hits_rect(b, ca[i], ca[(i + 1) % 4], tol)) return true;
    if (edge_hits_rect(a, cb[i], cb[(i + 1) % 4], tol)) return true;
  }
  return false;
}

}  // namespace lismodes
