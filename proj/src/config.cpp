#include "doa/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "doa/error.hpp"

namespace doa {

using nlohmann::json;

namespace {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : std::runtime_error(what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

[[noreturn]] void schema_fail(const std::string& ptr, const std::string& what) {
  throw SchemaError(ptr, what);
}

const json& require(const json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) schema_fail(ptr, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_fail(ptr, std::string("missing required key '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) schema_fail(ptr, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& v, const std::string& ptr) {
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() || v.is_number_float()) schema_fail(ptr, "expected a non-negative integer");
    schema_fail(ptr, "expected an integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& ptr) {
  if (!v.is_string()) schema_fail(ptr, "expected a string");
  return v.get<std::string>();
}

template <class F>
auto guarded(const std::string& ptr, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    schema_fail(ptr, e.what());
  }
}

ArrayGeometry parse_array(const json& j, const std::string& ptr) {
  if (j.contains("uca")) {
    const json& u = j["uca"];
    const std::string p = ptr + "/uca";
    const auto elements = unsigned_int(require(u, p, "elements"), p + "/elements");
    const double radius = number(require(u, p, "radius_m"), p + "/radius_m");
    const double carrier = number(require(u, p, "carrier_hz"), p + "/carrier_hz");
    return guarded(p, [&] { return uniform_circular_array(elements, radius, carrier); });
  }
  const json& list = require(j, ptr, "positions_m");
  if (!list.is_array()) schema_fail(ptr + "/positions_m", "expected an array of [x, y, z]");
  std::vector<Position> pos;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = ptr + "/positions_m/" + std::to_string(i);
    if (!list[i].is_array() || list[i].size() != 3) schema_fail(p, "expected [x, y, z]");
    pos.push_back({number(list[i][0], p + "/0"), number(list[i][1], p + "/1"),
                   number(list[i][2], p + "/2")});
  }
  double wavelength = 0;
  if (j.contains("wavelength_m")) {
    wavelength = number(j["wavelength_m"], ptr + "/wavelength_m");
  } else {
    const double carrier = number(require(j, ptr, "carrier_hz"), ptr + "/carrier_hz");
    wavelength = guarded(ptr + "/carrier_hz", [&] { return wavelength_for(carrier); });
  }
  return guarded(ptr, [&] { return ArrayGeometry(std::move(pos), wavelength); });
}

std::vector<double> axis_values(const json& j, const std::string& ptr) {
  const double start = number(require(j, ptr, "start"), ptr + "/start");
  const double stop = number(require(j, ptr, "stop"), ptr + "/stop");
  const double step = j.contains("step") ? number(j["step"], ptr + "/step") : 1.0;
  return guarded(ptr, [&] {
    const auto g = AngleGrid::from_ranges(start, stop, step, 90, 90, 1);
    return std::vector<double>(g.azimuths().begin(), g.azimuths().end());
  });
}

std::vector<double> elevation_values(const json& j, const std::string& ptr) {
  const double start = number(require(j, ptr, "start"), ptr + "/start");
  const double stop = number(require(j, ptr, "stop"), ptr + "/stop");
  const double step = j.contains("step") ? number(j["step"], ptr + "/step") : 1.0;
  return guarded(ptr, [&] {
    const auto g = AngleGrid::from_ranges(0, 0, 1, start, stop, step);
    return std::vector<double>(g.elevations().begin(), g.elevations().end());
  });
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) schema_fail("", "top level must be an object");
  const auto schema = unsigned_int(require(j, "", "schema"), "/schema");
  if (schema != kConfigSchemaVersion) {
    schema_fail("/schema", "unsupported schema version " + std::to_string(schema));
  }

  RunConfig cfg = reference_config();
  ScenarioConfig& sc = cfg.scenario;
  sc.geometry = parse_array(require(j, "", "array"), "/array");

  const json& sources = require(j, "", "sources");
  if (!sources.is_array()) schema_fail("/sources", "expected an array");
  sc.sources.clear();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string p = "/sources/" + std::to_string(i);
    SourceSpec s;
    s.azimuth_deg = number(require(sources[i], p, "azimuth_deg"), p + "/azimuth_deg");
    if (sources[i].contains("elevation_deg")) {
      s.elevation_deg = number(sources[i]["elevation_deg"], p + "/elevation_deg");
    }
    if (sources[i].contains("power")) s.power = number(sources[i]["power"], p + "/power");
    sc.sources.push_back(s);
  }

  if (j.contains("snr_db")) sc.snr_db = number(j["snr_db"], "/snr_db");
  if (j.contains("noiseless")) {
    if (!j["noiseless"].is_boolean()) schema_fail("/noiseless", "expected true or false");
    sc.noiseless = j["noiseless"].get<bool>();
  }
  if (j.contains("num_snapshots")) {
    sc.num_snapshots = unsigned_int(j["num_snapshots"], "/num_snapshots");
  }
  if (j.contains("seed")) sc.seed = unsigned_int(j["seed"], "/seed");
  if (j.contains("sampling_hz")) sc.sampling_hz = number(j["sampling_hz"], "/sampling_hz");
  if (j.contains("num_paths")) {
    sc.num_paths = static_cast<int>(unsigned_int(j["num_paths"], "/num_paths"));
  }
  guarded("/sources", [&] {
    sc.validate();
    return 0;
  });
  cfg.model_order = sc.sources.size();

  if (j.contains("grid")) {
    const json& g = j["grid"];
    auto az = axis_values(require(g, "/grid", "azimuth"), "/grid/azimuth");
    auto el = elevation_values(require(g, "/grid", "elevation"), "/grid/elevation");
    cfg.grid = guarded("/grid", [&] { return AngleGrid(std::move(az), std::move(el)); });
  }

  if (j.contains("estimate")) {
    const json& e = j["estimate"];
    if (!e.is_object()) schema_fail("/estimate", "expected an object");
    if (e.contains("model_order")) {
      cfg.model_order = unsigned_int(e["model_order"], "/estimate/model_order");
      if (cfg.model_order < 1 || cfg.model_order >= sc.geometry.size()) {
        schema_fail("/estimate/model_order", "model order must satisfy 1 <= D < m");
      }
    }
    if (e.contains("algorithms")) {
      const json& a = e["algorithms"];
      if (!a.is_array() || a.empty()) {
        schema_fail("/estimate/algorithms", "expected a non-empty array");
      }
      cfg.algorithms.clear();
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string p = "/estimate/algorithms/" + std::to_string(i);
        for (Algorithm alg : guarded(p, [&] { return parse_algorithm_list(text(a[i], p)); })) {
          cfg.algorithms.push_back(alg);
        }
      }
    }
    if (e.contains("precision")) {
      const std::string p = "/estimate/precision";
      cfg.precision = guarded(p, [&] { return parse_precision_mode(text(e["precision"], p)); });
    }
    if (e.contains("workers")) {
      const std::string p = "/estimate/workers";
      const json& w = e["workers"];
      cfg.workers = guarded(p, [&] {
        return w.is_string() ? WorkerCount::parse(w.get<std::string>())
                             : WorkerCount::fixed(unsigned_int(w, p));
      });
    }
  }

  if (j.contains("bench")) {
    const json& b = j["bench"];
    if (!b.is_object()) schema_fail("/bench", "expected an object");
    if (b.contains("ranges")) {
      const json& r = b["ranges"];
      if (!r.is_array() || r.empty()) schema_fail("/bench/ranges", "expected a non-empty array");
      cfg.bench_ranges.clear();
      for (std::size_t i = 0; i < r.size(); ++i) {
        const std::string p = "/bench/ranges/" + std::to_string(i);
        for (auto range : guarded(p, [&] { return parse_ranges(text(r[i], p)); })) {
          cfg.bench_ranges.push_back(range);
        }
      }
    }
    if (b.contains("repeats")) cfg.bench_repeats = unsigned_int(b["repeats"], "/bench/repeats");
  }
  return cfg;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::size_t parse_count(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
    throw Error(ErrorKind::invalid_parameter,
                "bad scan range '" + std::string(whole) + "' (expected AxB with positive counts)");
  }
  return v;
}

}  // namespace

PrecisionMode parse_precision_mode(std::string_view t) {
  if (t == "single") return PrecisionMode::single;
  if (t == "double") return PrecisionMode::double_;
  if (t == "both") return PrecisionMode::both;
  throw Error(ErrorKind::invalid_parameter,
              "unknown precision '" + std::string(t) + "' (expected single|double|both)");
}

std::string_view to_string(PrecisionMode mode) noexcept {
  switch (mode) {
    case PrecisionMode::single: return "single";
    case PrecisionMode::double_: return "double";
    case PrecisionMode::both: return "both";
  }
  return "?";
}

RunConfig reference_config(std::uint64_t seed) {
  ScenarioConfig sc{uniform_circular_array(8, 10.0, 15e6),
                    {{30.0, 90.0, 1.0}, {120.0, 90.0, 1.0}},
                    15.0,
                    false,
                    128,
                    seed};
  return RunConfig{std::move(sc), AngleGrid::from_ranges(0, 359, 1, 90, 90, 1), 2};
}

RunConfig parse_config(std::string_view source, std::string_view source_name) {
  json j;
  try {
    j = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(source, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::parse, std::string(source_name) + ":" + std::to_string(line) + ":" +
                                      std::to_string(col) + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const SchemaError& e) {
    throw Error(ErrorKind::parse,
                std::string(source_name) + ": at " + (e.pointer().empty() ? "/" : e.pointer()) +
                    ": " + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string dump_config(const RunConfig& cfg) {
  const ScenarioConfig& sc = cfg.scenario;
  json j;
  j["schema"] = kConfigSchemaVersion;
  json positions = json::array();
  for (const auto& p : sc.geometry.positions()) positions.push_back({p.x, p.y, p.z});
  j["array"] = {{"positions_m", positions}, {"wavelength_m", sc.geometry.wavelength()}};
  j["sources"] = json::array();
  for (const auto& s : sc.sources) {
    j["sources"].push_back(
        {{"azimuth_deg", s.azimuth_deg}, {"elevation_deg", s.elevation_deg}, {"power", s.power}});
  }
  j["snr_db"] = sc.snr_db;
  j["noiseless"] = sc.noiseless;
  j["num_snapshots"] = sc.num_snapshots;
  j["seed"] = sc.seed;
  j["sampling_hz"] = sc.sampling_hz;
  j["num_paths"] = sc.num_paths;

  // Grids are written as explicit ranges, which assumes uniform axes.
  const auto axis = [](std::span<const double> v) {
    const double step = v.size() > 1 ? v[1] - v[0] : 1.0;
    return json{{"start", v.front()}, {"stop", v.back()}, {"step", step}};
  };
  j["grid"] = {{"azimuth", axis(cfg.grid.azimuths())}, {"elevation", axis(cfg.grid.elevations())}};

  json algs = json::array();
  for (Algorithm a : cfg.algorithms) algs.push_back(std::string(to_string(a)));
  json workers = cfg.workers.is_automatic() ? json("auto") : json(cfg.workers.resolve());
  j["estimate"] = {{"model_order", cfg.model_order},
                   {"algorithms", algs},
                   {"precision", std::string(to_string(cfg.precision))},
                   {"workers", workers}};
  json ranges = json::array();
  for (const auto& [a, b] : cfg.bench_ranges) {
    ranges.push_back(std::to_string(a) + "x" + std::to_string(b));
  }
  j["bench"] = {{"ranges", ranges}, {"repeats", cfg.bench_repeats}};
  return j.dump(2);
}

std::vector<std::pair<std::size_t, std::size_t>> parse_ranges(std::string_view whole) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t pos = 0;
  while (pos <= whole.size()) {
    const std::size_t comma = std::min(whole.find(',', pos), whole.size());
    const std::string_view item = whole.substr(pos, comma - pos);
    const std::size_t x = item.find('x');
    if (x == std::string_view::npos) {
      throw Error(ErrorKind::invalid_parameter,
                  "bad scan range '" + std::string(item) + "' (expected AxB)");
    }
    out.emplace_back(parse_count(item.substr(0, x), item), parse_count(item.substr(x + 1), item));
    pos = comma + 1;
  }
  return out;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view t) {
  if (t == "all") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  return {parse_algorithm(t)};
}

}  // namespace doa
