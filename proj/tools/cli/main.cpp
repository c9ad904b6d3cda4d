#include "lismodes/errors.hpp"
#include "lismodes/runner/config.hpp"
#include "lismodes/runner/presets.hpp"
#include "lismodes/runner/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

using namespace lismodes;
using namespace lismodes::runner;

namespace {

constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct Overrides {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<double> mesh_lambda_frac;
};

void apply(const Overrides& o, ExperimentConfig& c) {
  if (o.seed) c.svd.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.mesh_lambda_frac) c.mesh_lambda_frac = *o.mesh_lambda_frac;
  if (!o.out_path.empty()) c.output = o.out_path;
}

ExperimentConfig config_from(const Overrides& o) {
  if (o.config_path.empty()) throw Error(ErrorKind::config, "--config PATH is required");
  ExperimentConfig c = load_config(o.config_path);
  apply(o, c);
  validate(c);
  return c;
}

// Writes to the configured output file, or stdout when none is set.
template <class F>
void with_output(const std::optional<std::string>& path, F&& body) {
  if (!path) {
    body(std::cout);
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::invalid_input, "cannot open output file " + *path);
  body(file);
  file.close();
  if (!file) throw Error(ErrorKind::invalid_input, "failed writing " + *path);
}

int run_link_verb(const Overrides& o) {
  const ExperimentConfig c = config_from(o);
  const PointResult r = run_link(c);
  with_output(c.output, [&](std::ostream& out) { out << csv_header(c) << '\n' << csv_row(c, r) << '\n'; });
  for (const auto& w : r.warnings) spdlog::warn("{}", w);
  if (!r.ok()) {
    spdlog::error("{}", r.error);
    return exit_failure;
  }
  return 0;
}

int run_sweep_config(const ExperimentConfig& c) {
  SweepSummary s;
  with_output(c.output, [&](std::ostream& out) { s = run_sweep(c, out); });
  spdlog::info("{}: wrote {} rows, {} failed", c.name, s.rows, s.failed);
  return 0;
}

int run_preset_verb(const std::string& name, const Overrides& o) {
  if (!o.config_path.empty()) throw Error(ErrorKind::config, "preset does not take --config");
  const Preset p = make_preset(name);
  spdlog::info("preset {}: {}", p.name, p.summary);
  if (const auto* table = std::get_if<FraunhoferTable>(&p.job)) {
    const std::optional<std::string> out = o.out_path.empty() ? std::nullopt : std::optional(o.out_path);
    with_output(out, [&](std::ostream& os) { write_fraunhofer_table(*table, os); });
    return 0;
  }
  ExperimentConfig c = std::get<ExperimentConfig>(p.job);
  apply(o, c);
  validate(c);
  return run_sweep_config(c);
}

int run_validate_verb(const Overrides& o) {
  const ExperimentConfig c = config_from(o);
  const auto points = sweep_points(c);
  std::cout << fmt::format("{}: ok, {} sweep point(s), {} orientation, {:.6g} GHz\n", o.config_path,
                           points.size(), to_string(c.orientation), c.frequency_hz / 1e9);
  const Scene first = place(c, points.front());
  const MeshChoice mtx = choose_mesh(c, first.tx);
  const MeshChoice mrx = choose_mesh(c, first.rx);
  std::cout << fmt::format("first point: tx mesh {} points, rx mesh {} points\n", mtx.points, mrx.points);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("lismodes");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");

  CLI::App app{"Communication modes and link budget of large intelligent surfaces"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string log_level = "info";
  app.add_option("--config", o.config_path, "experiment config (JSON)");
  app.add_option("--out", o.out_path, "CSV output path (default: config output or stdout)");
  app.add_option("--seed", o.seed, "seed for the randomized SVD");
  app.add_option("--workers", o.workers, "parallel workers")->check(CLI::PositiveNumber);
  app.add_option("--mesh-lambda-frac", o.mesh_lambda_frac, "mesh spacing in wavelengths")
      ->check(CLI::PositiveNumber);
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  auto* link = app.add_subcommand("link", "evaluate a single geometry");
  auto* sweep = app.add_subcommand("sweep", "run the sweep described by --config");
  auto* preset = app.add_subcommand("preset", "run a named figure preset");
  std::string preset_name;
  bool list_presets = false;
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", list_presets, "list preset names");
  auto* validate_cmd = app.add_subcommand("validate-config", "parse and check a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_usage;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*link) return run_link_verb(o);
    if (*sweep) return run_sweep_config(config_from(o));
    if (*preset) {
      if (list_presets || preset_name.empty()) {
        for (const auto& name : preset_names()) std::cout << name << '\n';
        return list_presets ? 0 : exit_usage;
      }
      return run_preset_verb(preset_name, o);
    }
    if (*validate_cmd) return run_validate_verb(o);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.kind() == ErrorKind::config ? exit_usage : exit_failure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return exit_failure;
  }
  return exit_usage;
}
