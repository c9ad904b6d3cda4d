#include "lismodes/runner/config.hpp"

#include "lismodes/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

namespace lismodes::runner {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw Error(ErrorKind::config, source_ + ": field " + path + ": " + what);
  }

  void only_keys(const json& obj, const std::string& path,
                 std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(path + "/" + key, "unknown field");
      }
    }
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  double positive(const json& v, const std::string& path) const {
    const double x = number(v, path);
    if (!(x > 0.0)) fail(path, "must be positive");
    return x;
  }

  std::uint64_t count(const json& v, const std::string& path, std::uint64_t min = 0) const {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(path, "expected a non-negative integer");
    }
    const auto n = v.get<std::uint64_t>();
    if (n < min) fail(path, "must be at least " + std::to_string(min));
    return n;
  }

  std::string word(const json& v, const std::string& path,
                   std::initializer_list<std::string_view> choices) const {
    if (!v.is_string()) fail(path, "expected a string");
    const auto s = v.get<std::string>();
    if (std::find(choices.begin(), choices.end(), s) == choices.end()) {
      std::string list;
      for (auto c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
      fail(path, "expected one of " + list + ", got \"" + s + "\"");
    }
    return s;
  }

  std::vector<double> fixed_array(const json& v, const std::string& path, std::size_t n) const {
    if (!v.is_array() || v.size() != n) fail(path, "expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(number(v[i], path + "/" + std::to_string(i)));
    return out;
  }

  // number | [numbers] | {start, stop, points, scale}
  std::vector<double> positive_range(const json& v, const std::string& path) const {
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(positive(v, path));
    } else if (v.is_array()) {
      if (v.empty()) fail(path, "list must not be empty");
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(positive(v[i], path + "/" + std::to_string(i)));
      }
    } else if (v.is_object()) {
      only_keys(v, path, {"start", "stop", "points", "scale"});
      for (const char* key : {"start", "stop", "points"}) {
        if (!v.contains(key)) fail(path + "/" + key, "missing");
      }
      const double start = positive(v["start"], path + "/start");
      const double stop = positive(v["stop"], path + "/stop");
      const auto points = count(v["points"], path + "/points", 1);
      const bool log = !v.contains("scale") || word(v["scale"], path + "/scale", {"log", "linear"}) == "log";
      if (points == 1) return {start};
      for (std::uint64_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        out.push_back(log ? start * std::pow(stop / start, t) : start + (stop - start) * t);
      }
      out.back() = stop;
    } else {
      fail(path, "expected a number, a list or a {start, stop, points} range");
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::string source_;
};

std::string location(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

Surface ExperimentConfig::tx_surface() const {
  const Surface base = Surface::axis_aligned(Vec3::Zero(), tx_len_u, tx_len_v);
  const double deg = std::numbers::pi / 180.0;
  return transform(base, rotation_from_angles(tx_angle_x_deg * deg, tx_angle_y_deg * deg), tx_center);
}

std::string to_string(Orientation o) {
  return o == Orientation::parallel ? "parallel" : "perpendicular";
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorKind::config, std::string(source) + ":" + location(text, e.byte) + ": " + msg);
  }

  const Reader r(source);
  r.only_keys(doc, "/", {"schema_version", "name", "frequency_hz", "tx", "rx", "distance",
                         "mesh_lambda_frac", "counting", "svd", "quad_tol", "capacity", "top_k",
                         "workers", "memory_cap_bytes", "analysis", "output"});
  if (!doc.contains("schema_version")) r.fail("/schema_version", "missing");
  if (r.count(doc["schema_version"], "/schema_version") != schema_version) {
    r.fail("/schema_version", "unsupported version, expected " + std::to_string(schema_version));
  }

  ExperimentConfig c;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) r.fail("/name", "expected a string");
    c.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("frequency_hz")) r.fail("/frequency_hz", "missing");
  c.frequency_hz = r.positive(doc["frequency_hz"], "/frequency_hz");

  if (doc.contains("tx")) {
    const json& tx = doc["tx"];
    r.only_keys(tx, "/tx", {"center", "angles_deg", "size", "polarization"});
    if (tx.contains("center")) {
      const auto p = r.fixed_array(tx["center"], "/tx/center", 3);
      c.tx_center = Vec3(p[0], p[1], p[2]);
    }
    if (tx.contains("angles_deg")) {
      const auto a = r.fixed_array(tx["angles_deg"], "/tx/angles_deg", 2);
      c.tx_angle_x_deg = a[0];
      c.tx_angle_y_deg = a[1];
    }
    if (tx.contains("size")) {
      const auto s = r.fixed_array(tx["size"], "/tx/size", 2);
      if (!(s[0] > 0.0) || !(s[1] > 0.0)) r.fail("/tx/size", "side lengths must be positive");
      c.tx_len_u = s[0];
      c.tx_len_v = s[1];
    }
    if (tx.contains("polarization")) {
      c.polarization_along_v = r.word(tx["polarization"], "/tx/polarization", {"u", "v"}) == "v";
    }
  }

  if (doc.contains("rx")) {
    const json& rx = doc["rx"];
    r.only_keys(rx, "/rx", {"area_m2", "aspect_ratio", "orientation"});
    if (rx.contains("area_m2")) c.rx_areas = r.positive_range(rx["area_m2"], "/rx/area_m2");
    if (rx.contains("aspect_ratio")) c.rx_aspect_ratio = r.positive(rx["aspect_ratio"], "/rx/aspect_ratio");
    if (rx.contains("orientation")) {
      c.orientation = r.word(rx["orientation"], "/rx/orientation", {"parallel", "perpendicular"}) ==
                              "parallel"
                          ? Orientation::parallel
                          : Orientation::perpendicular;
    }
  }

  if (!doc.contains("distance")) r.fail("/distance", "missing");
  {
    const json& d = doc["distance"];
    r.only_keys(d, "/distance", {"d_m", "d2_over_ar"});
    if (d.size() != 1) r.fail("/distance", "give exactly one of d_m, d2_over_ar");
    if (d.contains("d_m")) {
      c.distance_axis = DistanceAxis::meters;
      c.distances = r.positive_range(d["d_m"], "/distance/d_m");
    } else {
      c.distance_axis = DistanceAxis::d2_over_ar;
      c.distances = r.positive_range(d["d2_over_ar"], "/distance/d2_over_ar");
    }
  }

  if (doc.contains("mesh_lambda_frac") && !doc["mesh_lambda_frac"].is_null()) {
    c.mesh_lambda_frac = r.positive(doc["mesh_lambda_frac"], "/mesh_lambda_frac");
  }

  if (doc.contains("counting")) {
    const json& k = doc["counting"];
    r.only_keys(k, "/counting", {"rule", "threshold_db", "knee_window_db", "knee_min_drop_db"});
    if (k.contains("rule")) {
      c.counting.kind = r.word(k["rule"], "/counting/rule", {"knee", "relative"}) == "knee"
                            ? CountRule::Kind::knee
                            : CountRule::Kind::relative;
    }
    if (k.contains("threshold_db")) c.counting.threshold_db = r.positive(k["threshold_db"], "/counting/threshold_db");
    if (k.contains("knee_window_db")) {
      c.counting.knee_window_db = r.positive(k["knee_window_db"], "/counting/knee_window_db");
    }
    if (k.contains("knee_min_drop_db")) {
      c.counting.knee_min_drop_db = r.positive(k["knee_min_drop_db"], "/counting/knee_min_drop_db");
    }
  }

  if (doc.contains("svd")) {
    const json& s = doc["svd"];
    r.only_keys(s, "/svd", {"method", "seed", "k_max"});
    if (s.contains("method")) {
      c.svd.method = r.word(s["method"], "/svd/method", {"exact", "randomized"}) == "exact"
                         ? SvdMethod::exact
                         : SvdMethod::randomized;
    }
    if (s.contains("seed")) c.svd.seed = r.count(s["seed"], "/svd/seed");
    if (s.contains("k_max")) c.svd.k_max = r.count(s["k_max"], "/svd/k_max", 1);
  }

  if (doc.contains("quad_tol")) {
    c.quad_tol = r.positive(doc["quad_tol"], "/quad_tol");
    if (c.quad_tol > 1e-2) r.fail("/quad_tol", "must not exceed 1e-2");
  }

  if (doc.contains("capacity")) {
    const json& cap = doc["capacity"];
    r.only_keys(cap, "/capacity", {"gains", "noise", "total_power"});
    if (cap.contains("gains")) {
      c.relative_gains = r.word(cap["gains"], "/capacity/gains", {"relative", "absolute"}) == "relative";
    }
    if (cap.contains("noise")) c.noise = r.positive(cap["noise"], "/capacity/noise");
    if (cap.contains("total_power")) c.total_power = r.positive(cap["total_power"], "/capacity/total_power");
  }

  if (doc.contains("top_k")) c.top_k = r.count(doc["top_k"], "/top_k");
  if (doc.contains("workers")) c.workers = r.count(doc["workers"], "/workers", 1);
  if (doc.contains("memory_cap_bytes")) c.memory_cap_bytes = r.count(doc["memory_cap_bytes"], "/memory_cap_bytes", 1);
  if (doc.contains("analysis")) {
    c.analysis = r.word(doc["analysis"], "/analysis", {"full", "gain"}) == "full" ? Analysis::full : Analysis::gain;
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string() || doc["output"].get<std::string>().empty()) {
      r.fail("/output", "expected a non-empty path");
    }
    c.output = doc["output"].get<std::string>();
  }

  try {
    (void)c.tx_surface();
  } catch (const Error& e) {
    r.fail("/tx", e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void validate(const ExperimentConfig& c) {
  const auto bad = [](const std::string& what) { throw Error(ErrorKind::config, what); };
  if (!(c.frequency_hz > 0.0) || !std::isfinite(c.frequency_hz)) bad("frequency must be positive");
  if (!(c.tx_len_u > 0.0) || !(c.tx_len_v > 0.0)) bad("tx side lengths must be positive");
  if (c.rx_areas.empty() || c.distances.empty()) bad("sweep ranges must not be empty");
  for (double a : c.rx_areas) {
    if (!(a > 0.0) || !std::isfinite(a)) bad("rx areas must be positive");
  }
  for (double d : c.distances) {
    if (!(d > 0.0) || !std::isfinite(d)) bad("distances must be positive");
  }
  if (!(c.rx_aspect_ratio > 0.0)) bad("aspect ratio must be positive");
  if (c.mesh_lambda_frac && !(*c.mesh_lambda_frac > 0.0)) bad("mesh_lambda_frac must be positive");
  if (!(c.quad_tol > 0.0) || c.quad_tol > 1e-2) bad("quad_tol must lie in (0, 1e-2]");
  if (!(c.noise > 0.0) || !(c.total_power > 0.0)) bad("noise and total power must be positive");
  if (c.svd.k_max < 1) bad("k_max must be at least 1");
  if (c.workers < 1) bad("workers must be at least 1");
  (void)c.tx_surface();
}

}  // namespace lismodes::runner
