#include "lismodes/runner/runner.hpp"

#include "lismodes/capacity.hpp"
#include "lismodes/emkernel.hpp"
#include "lismodes/errors.hpp"
#include "lismodes/linkbudget.hpp"
#include "lismodes/modes.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace lismodes::runner {

namespace {

std::string db(double x) { return fmt::format("{:.3f}", 10.0 * std::log10(x)); }

std::string num(double x) { return fmt::format("{:.9g}", x); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string context(const SweepPoint& p) {
  return fmt::format("d={:.6g} m, A_R={:.6g} m^2, d2/A_R={:.6g}", p.distance, p.area_rx, p.d2_over_ar);
}

}  // namespace

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
  std::vector<double> areas = config.rx_areas;
  std::vector<double> dists = config.distances;
  std::sort(areas.begin(), areas.end());
  std::sort(dists.begin(), dists.end());
  std::vector<SweepPoint> out;
  for (double a : areas) {
    for (double x : dists) {
      SweepPoint p;
      p.index = out.size();
      p.area_rx = a;
      if (config.distance_axis == DistanceAxis::meters) {
        p.distance = x;
        p.d2_over_ar = x * x / a;
      } else {
        p.d2_over_ar = x;
        p.distance = std::sqrt(x * a);
      }
      out.push_back(p);
    }
  }
  return out;
}

Scene place(const ExperimentConfig& config, const SweepPoint& point) {
  const Surface tx = config.tx_surface();
  const double len_u = std::sqrt(point.area_rx / config.rx_aspect_ratio);
  const double len_v = std::sqrt(point.area_rx * config.rx_aspect_ratio);
  const Vec3 center = tx.center() + point.distance * tx.normal();
  if (config.orientation == Orientation::parallel) {
    return {tx, Surface(center, tx.basis_u(), tx.basis_v(), len_u, len_v)};
  }
  return {tx, Surface(center, tx.basis_u(), tx.normal(), len_u, len_v)};
}

MeshChoice choose_mesh(const ExperimentConfig& config, const Surface& surface) {
  const double lambda = config.wave().wavelength();
  MeshChoice m;
  if (config.mesh_lambda_frac) {
    m.spacing = *config.mesh_lambda_frac * lambda;
  } else {
    m.spacing = lambda / 4.0;
    if (mesh_point_count(surface, m.spacing) > auto_mesh_point_limit) {
      m.spacing = lambda / 2.0;
      m.coarsened = true;
    }
  }
  m.points = mesh_point_count(surface, m.spacing);
  return m;
}

PointResult evaluate(const ExperimentConfig& config, const SweepPoint& point,
                     std::size_t assembly_workers) {
  PointResult res;
  res.point = point;
  try {
    const Wave wave = config.wave();
    const Scene scene = place(config, point);
    const double area_tx = scene.tx.area();
    res.gain_friis = gain_friis(point.area_rx, point.distance);
    res.gain_limit = gain_saturation_limit;
    res.n_paraxial = n_paraxial(area_tx, point.area_rx, wave, point.distance);
    res.n_limit = n_limit_parallel(std::min(area_tx, point.area_rx), wave);

    if (surfaces_intersect(scene.tx, scene.rx)) {
      throw Error(ErrorKind::geometry, "transmitting and receiving surfaces intersect");
    }

    const Vec3 pol = config.polarization_along_v ? scene.tx.basis_v() : scene.tx.basis_u();
    res.gain_exact = gain_exact(scene.rx, scene.tx.center(), pol, config.quad_tol).gain_exact;

    if (config.analysis == Analysis::full) {
      const MeshChoice mtx = choose_mesh(config, scene.tx);
      const MeshChoice mrx = choose_mesh(config, scene.rx);
      for (const auto* m : {&mtx, &mrx}) {
        if (m->coarsened) {
          res.warnings.push_back(fmt::format(
              "{} surface needs more than {} samples at lambda/4; meshing at lambda/2",
              m == &mtx ? "tx" : "rx", auto_mesh_point_limit));
        }
      }
      AssemblyOptions aopts;
      aopts.workers = std::max<std::size_t>(1, assembly_workers);
      aopts.memory_cap_bytes = config.memory_cap_bytes;
      const std::size_t need = coupling_matrix_bytes(mrx.points, mtx.points);
      if (need > config.memory_cap_bytes) throw ResourceLimitError(need, config.memory_cap_bytes);

      const Mesh tx_mesh = build_mesh(scene.tx, mtx.spacing);
      const Mesh rx_mesh = build_mesh(scene.rx, mrx.spacing);
      res.mesh = tx_mesh.id + "/" + rx_mesh.id;
      const CouplingMatrix k = assemble_coupling_matrix(tx_mesh, rx_mesh, wave, aopts);

      SvdOptions sopts = config.svd;
      sopts.seed = config.svd.seed + point.index;
      const ModeSpectrum spectrum = mode_spectrum(k, sopts);
      res.n_counted = count_modes(spectrum, config.counting);

      const auto rel = spectrum.intensities_db_rel();
      res.sigma2_db_rel.assign(rel.begin(),
                               rel.begin() + static_cast<std::ptrdiff_t>(std::min(config.top_k, rel.size())));

      std::vector<double> gains;
      const double top = spectrum.sigmas.front() * spectrum.sigmas.front();
      for (double s : spectrum.sigmas) {
        const double g = s * s;
        if (g > 0.0) gains.push_back(config.relative_gains ? g / top : g);
      }
      if (!gains.empty()) res.capacity_bits = capacity(waterfill(gains, config.noise, config.total_power));
    }
  } catch (const std::exception& e) {
    res.error = fmt::format("{} ({})", e.what(), context(point));
  }
  return res;
}

std::string csv_header(const ExperimentConfig& config) {
  if (config.analysis == Analysis::gain) {
    return "d,d2_over_AR,A_R,gain_exact,gain_exact_db,gain_friis_db,gain_limit_db,error";
  }
  std::string h = "d,d2_over_AR,A_R,N_counted,N_paraxial,N_limit";
  for (std::size_t i = 1; i <= config.top_k; ++i) h += fmt::format(",sigma2_db_rel_{}", i);
  return h + ",gain_exact_db,gain_friis_db,gain_limit_db,capacity_bits,mesh,error";
}

std::string csv_row(const ExperimentConfig& config, const PointResult& r) {
  const auto& p = r.point;
  std::string row = fmt::format("{},{},{}", num(p.distance), num(p.d2_over_ar), num(p.area_rx));
  const auto opt_db = [](const std::optional<double>& x) { return x ? db(*x) : std::string(); };
  const bool have_budget = r.gain_friis > 0.0;
  if (config.analysis == Analysis::gain) {
    row += fmt::format(",{},{},{},{},{}", r.gain_exact ? num(*r.gain_exact) : "", opt_db(r.gain_exact),
                       have_budget ? db(r.gain_friis) : "", have_budget ? db(r.gain_limit) : "",
                       csv_escape(r.error));
    return row;
  }
  row += fmt::format(",{},{},{}", r.n_counted ? std::to_string(*r.n_counted) : "",
                     have_budget ? num(r.n_paraxial) : "", have_budget ? num(r.n_limit) : "");
  for (std::size_t i = 0; i < config.top_k; ++i) {
    row += ",";
    if (i < r.sigma2_db_rel.size()) row += fmt::format("{:.3f}", r.sigma2_db_rel[i]);
  }
  row += fmt::format(",{},{},{},{},{},{}", opt_db(r.gain_exact), have_budget ? db(r.gain_friis) : "",
                     have_budget ? db(r.gain_limit) : "",
                     r.capacity_bits ? fmt::format("{:.6f}", *r.capacity_bits) : "", r.mesh,
                     csv_escape(r.error));
  return row;
}

PointResult run_link(const ExperimentConfig& config) {
  validate(config);
  if (config.point_count() != 1) {
    throw Error(ErrorKind::config,
                fmt::format("link needs exactly one rx area and one distance, config has {} points; "
                            "use sweep",
                            config.point_count()));
  }
  const SweepPoint point = sweep_points(config).front();
  return evaluate(config, point, config.workers);
}

SweepSummary run_sweep(const ExperimentConfig& config, std::ostream& out) {
  validate(config);
  const std::vector<SweepPoint> points = sweep_points(config);
  const std::size_t n = points.size();
  const std::size_t threads = std::min(config.workers, n);
  const std::size_t assembly_workers = std::max<std::size_t>(1, config.workers / threads);

  out << csv_header(config) << '\n' << std::flush;
  spdlog::info("{}: {} sweep points on {} worker(s)", config.name, n, threads);

  std::vector<std::optional<PointResult>> slots(n);
  std::mutex mu;
  std::size_t next_write = 0;
  std::atomic<std::size_t> next_job{0};
  std::set<std::string> warned;
  SweepSummary summary;
  std::exception_ptr failure;
  const auto start = std::chrono::steady_clock::now();

  const auto flush_ready = [&] {
    while (next_write < n && slots[next_write]) {
      const PointResult& r = *slots[next_write];
      for (const auto& w : r.warnings) {
        if (warned.insert(w).second) spdlog::warn("{}", w);
      }
      out << csv_row(config, r) << '\n' << std::flush;
      if (!out) throw Error(ErrorKind::invalid_input, "failed writing CSV output");
      ++summary.rows;
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (r.ok()) {
        spdlog::info("[{}/{}] d2/A_R={:.4g} d={:.4g} m {} ({:.1f} s)", next_write + 1, n,
                     r.point.d2_over_ar, r.point.distance,
                     r.n_counted ? fmt::format("N={}", *r.n_counted) : std::string("gain only"), elapsed);
      } else {
        ++summary.failed;
        spdlog::warn("[{}/{}] {}", next_write + 1, n, r.error);
      }
      slots[next_write].reset();
      ++next_write;
    }
  };

  const auto work = [&] {
    try {
      for (;;) {
        const std::size_t i = next_job.fetch_add(1);
        if (i >= n) return;
        PointResult r = evaluate(config, points[i], assembly_workers);
        std::lock_guard lock(mu);
        if (failure) return;
        slots[i] = std::move(r);
        flush_ready();
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      next_job.store(n);
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return summary;
}

}  // namespace lismodes::runner
