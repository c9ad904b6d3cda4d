#include "lismodes/linkbudget.hpp"

#include "lismodes/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <tuple>
#include <vector>

namespace lismodes {

double gain_density(const Vec3& point, const Vec3& normal, const Vec3& tx_pos,
                    const Vec3& polarization) {
  const Vec3 r = point - tx_pos;
  const double r2 = r.squaredNorm();
  const double inv_r = 1.0 / std::sqrt(r2);
  const double cos_incidence = std::abs(normal.dot(r)) * inv_r;
  const double e_dot = polarization.dot(r) * inv_r;
  return cos_incidence * (1.0 - e_dot * e_dot) / (4.0 * std::numbers::pi * r2);
}

namespace {

// 7-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 7> gl_nodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr std::array<double, 7> gl_weights = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

struct Panel {
  double u0, u1, v0, v1;
  int level;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

class GainIntegrator {
 public:
  GainIntegrator(const Surface& s, const Vec3& tx, const Vec3& pol)
      : surface_(s), tx_(tx), pol_(pol) {}

  double rule(double u0, double u1, double v0, double v1) const {
    const double hu = 0.5 * (u1 - u0);
    const double hv = 0.5 * (v1 - v0);
    const double cu = 0.5 * (u0 + u1);
    const double cv = 0.5 * (v0 + v1);
    double sum = 0.0;
    for (std::size_t i = 0; i < gl_nodes.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < gl_nodes.size(); ++j) {
        const Vec3 p = surface_.point_at(cu + hu * gl_nodes[i], cv + hv * gl_nodes[j]);
        row += gl_weights[j] * gain_density(p, surface_.normal(), tx_, pol_);
      }
      sum += gl_weights[i] * row;
    }
    return sum * hu * hv;
  }

  Panel make_panel(double u0, double u1, double v0, double v1, int level) const {
    const double um = 0.5 * (u0 + u1);
    const double vm = 0.5 * (v0 + v1);
    const double coarse = rule(u0, u1, v0, v1);
    const double fine = rule(u0, um, v0, vm) + rule(um, u1, v0, vm) + rule(u0, um, vm, v1) +
                        rule(um, u1, vm, v1);
    return {u0, u1, v0, v1, level, fine, std::abs(fine - coarse)};
  }

 private:
  const Surface& surface_;
  Vec3 tx_;
  Vec3 pol_;
};

std::vector<double> split_points(double half, double foot) {
  std::vector<double> cuts = {-half};
  if (foot > -half && foot < half) cuts.push_back(foot);
  cuts.push_back(half);
  return cuts;
}

}  // namespace

GainReport gain_exact(const Surface& surface, const Vec3& tx_pos, const Vec3& polarization,
                      double quad_tol) {
  QuadratureOptions options;
  options.rel_tol = quad_tol;
  return gain_exact(surface, tx_pos, polarization, options);
}

GainReport gain_exact(const Surface& surface, const Vec3& tx_pos, const Vec3& polarization,
                      const QuadratureOptions& options) {
  if (!(options.rel_tol > 0.0) || options.rel_tol > 1e-2) {
    throw Error(ErrorKind::invalid_argument, "quadrature tolerance must lie in (0, 1e-2]");
  }
  if (!tx_pos.allFinite() || std::abs(polarization.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_argument, "polarization must be a unit vector");
  }
  const Vec3 foot = surface.to_local(tx_pos);
  const double plane_tol = 1e-12 * std::max(surface.size(), (tx_pos - surface.center()).norm());
  if (std::abs(foot.z()) <= plane_tol && surface.contains_local(foot.x(), foot.y())) {
    throw Error(ErrorKind::geometry, "transmitter lies on the receiving aperture");
  }

  GainReport report;
  report.distance = (tx_pos - surface.center()).norm();
  report.area_rx = surface.area();
  report.gain_friis = gain_friis(surface.area(), report.distance);

  const GainIntegrator integrator(surface, tx_pos, polarization);
  std::priority_queue<Panel, std::vector<Panel>, ByError> active;
  std::vector<Panel> done;

  const auto us = split_points(0.5 * surface.len_u(), foot.x());
  const auto vs = split_points(0.5 * surface.len_v(), foot.y());
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    for (std::size_t j = 0; j + 1 < vs.size(); ++j) {
      Panel p = integrator.make_panel(us[i], us[i + 1], vs[j], vs[j + 1], 0);
      total += p.value;
      total_err += p.error;
      active.push(p);
    }
  }

  const auto converged = [&] { return total_err <= options.rel_tol * std::abs(total); };
  bool capped = false;
  while (!converged()) {
    if (active.empty() || active.size() + done.size() >= options.max_panels) {
      capped = true;
      break;
    }
    const Panel worst = active.top();
    active.pop();
    if (worst.level >= options.max_level) {
      done.push_back(worst);
      continue;
    }
    const double um = 0.5 * (worst.u0 + worst.u1);
    const double vm = 0.5 * (worst.v0 + worst.v1);
    const std::array<Panel, 4> children = {
        integrator.make_panel(worst.u0, um, worst.v0, vm, worst.level + 1),
        integrator.make_panel(um, worst.u1, worst.v0, vm, worst.level + 1),
        integrator.make_panel(worst.u0, um, vm, worst.v1, worst.level + 1),
        integrator.make_panel(um, worst.u1, vm, worst.v1, worst.level + 1)};
    total -= worst.value;
    total_err -= worst.error;
    for (const Panel& c : children) {
      total += c.value;
      total_err += c.error;
      active.push(c);
    }
  }

  // re-sum from the final partition to shed drift from the running updates
  while (!active.empty()) {
    done.push_back(active.top());
    active.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& a, const Panel& b) {
    return std::tie(a.u0, a.v0) < std::tie(b.u0, b.v0);
  });
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : done) {
    total += p.value;
    total_err += p.error;
  }

  report.gain_exact = total;
  report.quadrature_error_estimate = total != 0.0 ? total_err / std::abs(total) : 0.0;
  report.panels = done.size();
  if (capped && !converged()) {
    std::ostringstream os;
    os << "adaptive quadrature reached its subdivision cap with relative error "
       << report.quadrature_error_estimate << " > " << options.rel_tol;
    throw ConvergenceError(os.str(), total, report.quadrature_error_estimate);
  }
  return report;
}

double gain_friis(double area_rx, double distance) {
  if (!(distance > 0.0) || !(area_rx > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "Friis gain needs positive area and distance");
  }
  return area_rx / (4.0 * std::numbers::pi * distance * distance);
}

double gain_from_modes(const ModeSpectrum& spectrum, std::optional<double> tail_energy) {
  if (spectrum.empty()) throw Error(ErrorKind::invalid_argument, "empty spectrum");
  if (spectrum.complete()) return spectrum.energy();
  if (!tail_energy) {
    throw Error(ErrorKind::invalid_use,
                "gain from a truncated spectrum needs a bound on the discarded energy");
  }
  if (!(*tail_energy >= 0.0)) throw Error(ErrorKind::invalid_argument, "tail energy must be >= 0");
  return spectrum.energy() + *tail_energy;
}

double tail_energy(const ModeSpectrum& spectrum) {
  return std::max(0.0, spectrum.source_frobenius2 - spectrum.energy());
}

}  // namespace lismodes
