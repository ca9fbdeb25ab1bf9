#include "doa/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "doa/error.hpp"
#include "doa/pipeline.hpp"

namespace doa {

namespace {

void check_pair(std::span<const double> measured, std::span<const double> truth) {
  if (measured.size() != truth.size()) {
    throw Error(ErrorKind::dimension_mismatch, "percent_error: length mismatch");
  }
  if (truth.empty()) throw Error(ErrorKind::invalid_parameter, "percent_error: empty input");
  for (double g : truth) {
    if (g == 0.0) throw Error(ErrorKind::invalid_parameter, "percent_error: ground truth has a zero");
  }
}

template <class T>
std::vector<double> widen(const std::vector<T>& v) {
  return {v.begin(), v.end()};
}

struct RunOutput {
  std::vector<double> values;
  std::vector<std::size_t> cells;
};

template <class T>
RunOutput run_at(const SnapshotMatrix<double>& draw, const ArrayGeometry& geom,
                 const AngleGrid& grid, Algorithm alg, std::size_t model_order) {
  const auto manifold = build_manifold<T>(geom, grid);
  const ComplexMatrix<T> x = [&] {
    if constexpr (std::is_same_v<T, float>) {
      return quantize(draw).data;
    } else {
      return draw.data;
    }
  }();
  const auto result = run_pipeline(x, manifold, model_order, alg);
  RunOutput out{widen(result.spectrum.values), {}};
  for (const auto& p : result.estimate.peaks) out.cells.push_back(p.grid_index);
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

RunOutput run_at(Precision p, const SnapshotMatrix<double>& draw, const ArrayGeometry& geom,
                 const AngleGrid& grid, Algorithm alg, std::size_t model_order) {
  return p == Precision::single ? run_at<float>(draw, geom, grid, alg, model_order)
                                : run_at<double>(draw, geom, grid, alg, model_order);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::pair<std::size_t, std::size_t> parse_grid_label(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw Error(ErrorKind::parse, "bad grid label '" + text + "'");
  return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
}

using Clock = std::chrono::steady_clock;

}  // namespace

double percent_error(std::span<const double> measured, std::span<const double> ground_truth) {
  check_pair(measured, ground_truth);
  double sum = 0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    sum += std::abs(measured[i] - ground_truth[i]) / std::abs(ground_truth[i]);
  }
  return 100.0 / static_cast<double>(measured.size()) * sum;
}

double max_abs_relative_percent(std::span<const double> measured,
                                std::span<const double> ground_truth) {
  check_pair(measured, ground_truth);
  double worst = 0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    worst = std::max(worst, std::abs(measured[i] - ground_truth[i]) / std::abs(ground_truth[i]));
  }
  return 100.0 * worst;
}

AccuracyReport dual_precision_validate(const ScenarioConfig& cfg, const AngleGrid& grid,
                                       Algorithm alg, std::size_t model_order,
                                       Precision measured, Precision ground_truth) {
  const SnapshotMatrix<double> draw = generate_snapshots(cfg);
  const RunOutput truth = run_at(ground_truth, draw, cfg.geometry, grid, alg, model_order);
  const RunOutput meas = run_at(measured, draw, cfg.geometry, grid, alg, model_order);

  AccuracyReport r;
  r.algorithm = alg;
  r.measured = measured;
  r.ground_truth = ground_truth;
  r.az_count = grid.azimuth_count();
  r.el_count = grid.elevation_count();
  r.percent_error = percent_error(meas.values, truth.values);
  r.max_abs_relative = max_abs_relative_percent(meas.values, truth.values);
  r.estimates_match = meas.cells == truth.cells;
  r.measured_cells = meas.cells;
  r.truth_cells = truth.cells;
  return r;
}

void write_accuracy_csv(std::ostream& out, std::span<const AccuracyReport> reports) {
  out << "algorithm,precision_pair,grid,percent_error,max_abs_rel,estimates_match\n";
  std::ostringstream line;
  line.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : reports) {
    line.str({});
    line << to_string(r.algorithm) << ',' << to_string(r.measured) << '/'
         << to_string(r.ground_truth) << ',' << r.az_count << 'x' << r.el_count << ','
         << r.percent_error << ',' << r.max_abs_relative << ','
         << (r.estimates_match ? "true" : "false") << '\n';
    out << line.str();
  }
}

std::vector<AccuracyReport> read_accuracy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "algorithm,precision_pair,grid,percent_error,max_abs_rel,estimates_match") {
    throw Error(ErrorKind::parse, "accuracy CSV: unexpected header");
  }
  std::vector<AccuracyReport> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    try {
      if (f.size() != 6) throw Error(ErrorKind::parse, "expected 6 fields");
      AccuracyReport r;
      r.algorithm = parse_algorithm(f[0]);
      const auto slash = f[1].find('/');
      if (slash == std::string::npos) throw Error(ErrorKind::parse, "bad precision pair");
      r.measured = parse_precision(f[1].substr(0, slash));
      r.ground_truth = parse_precision(f[1].substr(slash + 1));
      std::tie(r.az_count, r.el_count) = parse_grid_label(f[2]);
      r.percent_error = std::stod(f[3]);
      r.max_abs_relative = std::stod(f[4]);
      if (f[5] != "true" && f[5] != "false") throw Error(ErrorKind::parse, "bad boolean");
      r.estimates_match = f[5] == "true";
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::parse,
                  "accuracy CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

double StepCosts::total() const noexcept {
  return static_cast<double>(step1) + static_cast<double>(step2_3) + static_cast<double>(step4) +
         static_cast<double>(step5) + step6;
}

StepCosts step_costs(const CostModel& model) {
  const std::int64_t m = model.sensors;
  const std::int64_t n = model.snapshots;
  const std::int64_t d = model.sources;
  const std::int64_t l = model.scan_angles;
  if (m < 1 || n < 1 || d < 1 || l < 1) {
    throw Error(ErrorKind::invalid_parameter, "cost model counts must all be >= 1");
  }
  StepCosts c;
  // M N (3M + 1) is always even.
  c.step1 = m * n * (3 * m + 1) / 2;
  c.step2_3 = 12 * m * m * m;
  // (1/2 - D) M^2 - (1/2 + D) M == (M^2 - M)/2 - D (M^2 + M)
  c.step4 = m * m * m + (m * m - m) / 2 - d * (m * m + m);
  c.step5 = l * (2 * n * n + n);
  c.step6 = static_cast<double>(l) * std::log(static_cast<double>(l));
  return c;
}

EnvironmentInfo detect_environment(Precision precision) {
  EnvironmentInfo env;
  env.precision = precision;
  env.logical_cores = std::max(1u, std::thread::hardware_concurrency());
  env.cpu_model = "unknown";
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        env.cpu_model = line.substr(line.find_first_not_of(" \t", colon + 1));
      }
      break;
    }
  }
  return env;
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorKind::invalid_parameter, "median of empty sample");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

namespace {

template <class T>
double timed_median(const ComplexMatrix<T>& x, const ManifoldTable<T>& manifold,
                    std::size_t model_order, Algorithm alg, WorkerCount workers,
                    std::size_t repeats, const std::function<void(BenchEvent)>& hook) {
  run_pipeline(x, manifold, model_order, alg, workers);  // warm-up
  std::vector<double> samples;
  samples.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    if (hook) hook(BenchEvent::timing_started);
    const auto start = Clock::now();
    run_pipeline(x, manifold, model_order, alg, workers);
    const auto stop = Clock::now();
    if (hook) hook(BenchEvent::timing_stopped);
    samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return median(std::move(samples));
}

template <class T>
BenchRow bench_one(const ComplexMatrix<T>& x, const ArrayGeometry& geom, const AngleGrid& grid,
                   std::size_t model_order, Algorithm alg, const BenchOptions& options) {
  const auto manifold = build_manifold<T>(geom, grid);
  if (options.hook) options.hook(BenchEvent::manifold_built);

  BenchRow row;
  row.az_count = grid.azimuth_count();
  row.el_count = grid.elevation_count();
  row.workers = options.workers.resolve();
  row.single_ms = timed_median(x, manifold, model_order, alg, WorkerCount::fixed(1),
                               options.repeats, options.hook);
  row.multi_ms = timed_median(x, manifold, model_order, alg, options.workers, options.repeats,
                              options.hook);
  row.speedup = row.single_ms / row.multi_ms;
  return row;
}

}  // namespace

BenchReport bench_scan_ranges(const ScenarioConfig& cfg, std::span<const AngleGrid> ranges,
                              Algorithm alg, const BenchOptions& options) {
  if (options.repeats < 3) {
    throw Error(ErrorKind::invalid_parameter,
                "bench needs at least 3 repeats, got " + std::to_string(options.repeats));
  }
  const SnapshotMatrix<double> draw = generate_snapshots(cfg);
  const std::size_t model_order = cfg.sources.size();

  BenchReport report;
  report.algorithm = alg;
  report.repeats = options.repeats;
  report.environment = detect_environment(options.precision);
  if (options.precision == Precision::single) {
    const auto x = quantize(draw).data;
    for (const auto& g : ranges) {
      report.rows.push_back(bench_one(x, cfg.geometry, g, model_order, alg, options));
    }
  } else {
    for (const auto& g : ranges) {
      report.rows.push_back(bench_one(draw.data, cfg.geometry, g, model_order, alg, options));
    }
  }
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "algorithm,az_count,el_count,workers,median_ms,speedup\n";
  std::ostringstream line;
  line.setf(std::ios::fixed);
  for (const auto& r : report.rows) {
    line.str({});
    line << to_string(report.algorithm) << ',' << r.az_count << ',' << r.el_count << ','
         << r.workers << ',';
    line.precision(3);
    line << r.multi_ms << ',';
    line.precision(4);
    line << r.speedup << '\n';
    out << line.str();
  }
}

std::string environment_json(const BenchReport& report) {
  nlohmann::json j;
  j["cpu_model"] = report.environment.cpu_model;
  j["logical_cores"] = report.environment.logical_cores;
  j["precision"] = to_string(report.environment.precision);
  j["algorithm"] = to_string(report.algorithm);
  j["repeats"] = report.repeats;
  j["ranges"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    j["ranges"].push_back({{"az_count", r.az_count},
                           {"el_count", r.el_count},
                           {"workers", r.workers},
                           {"single_worker_median_ms", r.single_ms},
                           {"multi_worker_median_ms", r.multi_ms},
                           {"speedup", r.speedup}});
  }
  return j.dump(2);
}

}  // namespace doa
