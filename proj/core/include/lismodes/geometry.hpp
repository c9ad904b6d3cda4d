#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace lismodes {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double speed_of_light = 299792458.0;  // m/s

/// Monochromatic carrier. Stores frequency and the derived wavelength and
/// wavenumber so that callers never recompute them inconsistently.
class Wave {
 public:
  static Wave from_frequency(double frequency_hz);
  static Wave from_wavelength(double wavelength_m);

  double frequency() const noexcept { return frequency_; }
  double wavelength() const noexcept { return wavelength_; }
  double wavenumber() const noexcept { return wavenumber_; }

 private:
  Wave(double frequency, double wavelength);

  double frequency_;
  double wavelength_;
  double wavenumber_;
};

/// Oriented zero-thickness rectangle. The local frame (basis_u, basis_v,
/// normal) is right-handed and orthonormal; the rectangle spans
/// [-len_u/2, len_u/2] x [-len_v/2, len_v/2] in that frame around `center`.
class Surface {
 public:
  static constexpr double frame_tolerance = 1e-12;

  /// The normal is basis_u x basis_v. Throws invalid-argument if the basis is
  /// not orthonormal within `frame_tolerance` or a side length is not positive.
  Surface(const Vec3& center, const Vec3& basis_u, const Vec3& basis_v, double len_u,
          double len_v);

  /// Rectangle in the plane z = center.z with u = +x, v = +y, normal = +z.
  static Surface axis_aligned(const Vec3& center, double len_u, double len_v);

  const Vec3& center() const noexcept { return center_; }
  const Vec3& basis_u() const noexcept { return basis_u_; }
  const Vec3& basis_v() const noexcept { return basis_v_; }
  const Vec3& normal() const noexcept { return normal_; }
  double len_u() const noexcept { return len_u_; }
  double len_v() const noexcept { return len_v_; }

  double area() const noexcept { return len_u_ * len_v_; }
  /// Largest side; the size parameter used for the Fraunhofer boundary.
  double size() const noexcept { return len_u_ > len_v_ ? len_u_ : len_v_; }
  double aspect_ratio() const noexcept { return len_v_ / len_u_; }

  Vec3 point_at(double u, double v) const { return center_ + u * basis_u_ + v * basis_v_; }
  /// Coordinates of `p` in the local frame (u, v, height above the plane).
  Vec3 to_local(const Vec3& p) const;
  bool contains_local(double u, double v, double slack = 0.0) const;
  std::array<Vec3, 4> corners() const;

 private:
  Vec3 center_;
  Vec3 basis_u_;
  Vec3 basis_v_;
  Vec3 normal_;
  double len_u_;
  double len_v_;
};

/// Midpoint-rule sampling of a Surface. Points are cell centers in row-major
/// order over u then v (index = iu * n_v + iv).
struct Mesh {
  std::vector<Vec3> points;
  std::vector<double> weights;
  double spacing = 0.0;  // realised max(du, dv)
  std::size_t n_u = 0;
  std::size_t n_v = 0;
  std::string id;

  std::size_t size() const noexcept { return points.size(); }
  double total_weight() const;
};

Mesh build_mesh(const Surface& surface, double target_spacing);

/// Number of samples build_mesh would produce, without building the mesh.
std::size_t mesh_point_count(const Surface& surface, double target_spacing);

/// Rotates the surface frame and center by `rotation`, then translates the
/// center. Throws invalid-argument unless `rotation` is a proper rotation.
Surface transform(const Surface& surface, const Mat3& rotation, const Vec3& translation);

Mat3 axis_rotation(const Vec3& axis, double angle_rad);

/// Rotation about the fixed x axis by `about_x_rad` followed by the fixed y
/// axis by `about_y_rad`, i.e. R = Ry * Rx.
Mat3 rotation_from_angles(double about_x_rad, double about_y_rad);

/// Conventional Fresnel/Fraunhofer boundary 2 D^2 / lambda.
double fraunhofer_distance(double size, const Wave& wave);

/// True when the two closed rectangles share at least one point.
bool surfaces_intersect(const Surface& a, const Surface& b);

}  // namespace lismodes
