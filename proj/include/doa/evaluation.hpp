#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/signal_sim.hpp"
#include "doa/spectrum.hpp"
#include "doa/subspace.hpp"

namespace doa {

// (100 / N) * sum |measured - truth| / |truth|
double percent_error(std::span<const double> measured, std::span<const double> ground_truth);

// Largest single-point relative deviation, in percent.
double max_abs_relative_percent(std::span<const double> measured,
                                std::span<const double> ground_truth);

struct AccuracyReport {
  Algorithm algorithm = Algorithm::music;
  Precision measured = Precision::single;
  Precision ground_truth = Precision::double_;
  std::size_t az_count = 0;
  std::size_t el_count = 0;
  double percent_error = 0;
  double max_abs_relative = 0;
  bool estimates_match = false;

  // Selected DOA grid cells of each run; not part of the CSV record.
  std::vector<std::size_t> measured_cells;
  std::vector<std::size_t> truth_cells;

  std::size_t num_points() const noexcept { return az_count * el_count; }
};

/// Runs the whole pipeline twice on one snapshot draw: once at the
/// ground-truth precision and once at the measured precision. The draw is
/// made in double and rounded to single for any single-precision run.
/// estimates_match compares the selected grid cells as sets.
AccuracyReport dual_precision_validate(const ScenarioConfig& cfg, const AngleGrid& grid,
                                       Algorithm alg, std::size_t model_order,
                                       Precision measured = Precision::single,
                                       Precision ground_truth = Precision::double_);

// algorithm,precision_pair,grid,percent_error,max_abs_rel,estimates_match
// precision_pair is "<measured>/<ground_truth>", grid is "<az>x<el>".
void write_accuracy_csv(std::ostream& out, std::span<const AccuracyReport> reports);
std::vector<AccuracyReport> read_accuracy_csv(std::istream& in);

struct CostModel {
  std::int64_t sensors = 1;    // M
  std::int64_t snapshots = 1;  // N
  std::int64_t sources = 1;    // D
  std::int64_t scan_angles = 1;  // L
};

// Operation counts per pipeline step, exactly as tabulated:
//   step 1      (3 M^2 N + M N) / 2
//   step 2 & 3  12 M^3
//   step 4      M^3 + (1/2 - D) M^2 - (1/2 + D) M
//   step 5      L (2 N^2 + N)
//   step 6      L ln(L)
// Steps 1-5 are exact integers for every valid input.
struct StepCosts {
  std::int64_t step1 = 0;
  std::int64_t step2_3 = 0;
  std::int64_t step4 = 0;
  std::int64_t step5 = 0;
  double step6 = 0;

  double total() const noexcept;
  double step5_share() const noexcept { return static_cast<double>(step5) / total(); }
};

StepCosts step_costs(const CostModel& model);

struct EnvironmentInfo {
  std::string cpu_model;
  unsigned logical_cores = 0;
  Precision precision = Precision::single;
};

EnvironmentInfo detect_environment(Precision precision);

struct BenchRow {
  std::size_t az_count = 0;
  std::size_t el_count = 0;
  std::size_t workers = 1;  // multi-worker count
  double single_ms = 0;     // median, one worker
  double multi_ms = 0;      // median, `workers` workers
  double speedup = 0;       // single_ms / multi_ms
};

struct BenchReport {
  Algorithm algorithm = Algorithm::music;
  std::size_t repeats = 0;
  std::vector<BenchRow> rows;
  EnvironmentInfo environment;
};

enum class BenchEvent { manifold_built, timing_started, timing_stopped };

struct BenchOptions {
  std::size_t repeats = 5;
  WorkerCount workers = WorkerCount::automatic();
  Precision precision = Precision::single;
  std::function<void(BenchEvent)> hook;
};

/// Times the post-manifold pipeline for every scan range with one worker and
/// with options.workers: one discarded warm-up run, then the median of
/// options.repeats runs on a monotonic clock. Manifold construction happens
/// before any timed region. Requires repeats >= 3.
BenchReport bench_scan_ranges(const ScenarioConfig& cfg, std::span<const AngleGrid> ranges,
                              Algorithm alg, const BenchOptions& options = {});

// algorithm,az_count,el_count,workers,median_ms,speedup (median of the
// multi-worker runs).
void write_bench_csv(std::ostream& out, const BenchReport& report);

// JSON sidecar: environment plus per-range single and multi medians.
std::string environment_json(const BenchReport& report);

double median(std::vector<double> samples);

}  // namespace doa
