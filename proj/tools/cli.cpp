#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "doa/config.hpp"
#include "doa/error.hpp"
#include "doa/evaluation.hpp"
#include "doa/pipeline.hpp"
#include "doa/signal_sim.hpp"

namespace doa::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::string> alg;
  std::optional<std::string> precision;
  std::optional<std::string> workers;
  std::string ground_truth = "double";
  std::optional<std::string> ranges;
  std::optional<std::size_t> repeats;
  std::optional<std::string> snapshots;
};

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config_path);
  if (o.seed) cfg.scenario.seed = *o.seed;
  if (o.alg) cfg.algorithms = parse_algorithm_list(*o.alg);
  if (o.precision) cfg.precision = parse_precision_mode(*o.precision);
  if (o.workers) cfg.workers = WorkerCount::parse(*o.workers);
  if (o.ranges) cfg.bench_ranges = parse_ranges(*o.ranges);
  if (o.repeats) cfg.bench_repeats = *o.repeats;
  return cfg;
}

fs::path output_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, "cannot write '" + p.string() + "'");
  return f;
}

std::vector<Precision> precisions(PrecisionMode mode) {
  switch (mode) {
    case PrecisionMode::single: return {Precision::single};
    case PrecisionMode::double_: return {Precision::double_};
    case PrecisionMode::both: return {Precision::single, Precision::double_};
  }
  return {};
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const RunConfig cfg = load(o);
  const auto x = generate_snapshots(cfg.scenario);
  const Precision p = cfg.precision == PrecisionMode::single ? Precision::single
                                                              : Precision::double_;
  const auto path = output_path(o, "snapshots.bin");
  save_snapshots(path.string(), x, p);
  out << "wrote " << path.string() << " (" << x.elements() << "x" << x.snapshots() << ", "
      << to_string(p) << ")\n";
  out << "seed " << cfg.scenario.seed << ", ";
  if (cfg.scenario.noiseless) {
    out << "noiseless";
  } else {
    out << "snr " << cfg.scenario.snr_db << " dB, noise variance "
        << cfg.scenario.noise_variance();
  }
  out << ", " << cfg.scenario.sources.size() << " source(s)\n";
  return kOk;
}

template <class T>
void estimate_one(const RunConfig& cfg, const SnapshotMatrix<double>& draw, Algorithm alg,
                  const Options& o, std::ostream& out) {
  const auto manifold = build_manifold<T>(cfg.scenario.geometry, cfg.grid);
  const ComplexMatrix<T> x = [&] {
    if constexpr (std::is_same_v<T, float>) {
      return quantize(draw).data;
    } else {
      return draw.data;
    }
  }();
  const auto result = run_pipeline(x, manifold, cfg.model_order, alg, cfg.workers);
  const auto& est = result.estimate;
  const Precision p = precision_of<T>();

  out << "[" << to_string(alg) << " / " << to_string(p) << "] " << est.peaks.size() << " of "
      << est.requested << " peak(s)" << (est.underdetermined ? " (underdetermined)" : "") << '\n';
  for (std::size_t k = 0; k < est.peaks.size(); ++k) {
    const auto& pk = est.peaks[k];
    out << "  " << k + 1 << ". azimuth " << pk.azimuth_deg << " deg, elevation "
        << pk.elevation_deg << " deg, power " << std::setprecision(6) << pk.power << '\n';
  }
  const auto path =
      output_path(o, "spectrum_" + std::string(to_string(alg)) + "_" + std::string(to_string(p)) +
                         ".csv");
  auto f = open_out(path);
  write_spectrum_csv(f, result.spectrum);
  out << "  spectrum: " << path.string() << '\n';
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const RunConfig cfg = load(o);
  SnapshotMatrix<double> draw;
  if (o.snapshots) {
    draw = load_snapshots(*o.snapshots).snapshots;
    if (draw.elements() != cfg.scenario.geometry.size()) {
      throw Error(ErrorKind::dimension_mismatch,
                  "snapshot file has " + std::to_string(draw.elements()) +
                      " elements but the configured array has " +
                      std::to_string(cfg.scenario.geometry.size()));
    }
  } else {
    draw = generate_snapshots(cfg.scenario);
  }
  for (Algorithm alg : cfg.algorithms) {
    for (Precision p : precisions(cfg.precision)) {
      if (p == Precision::single) {
        estimate_one<float>(cfg, draw, alg, o, out);
      } else {
        estimate_one<double>(cfg, draw, alg, o, out);
      }
    }
  }
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  RunConfig cfg = load(o);
  if (!o.alg) cfg.algorithms = {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  const Precision measured = o.precision ? parse_precision(*o.precision) : Precision::single;
  const Precision truth = parse_precision(o.ground_truth);

  std::vector<AccuracyReport> reports;
  for (Algorithm alg : cfg.algorithms) {
    reports.push_back(
        dual_precision_validate(cfg.scenario, cfg.grid, alg, cfg.model_order, measured, truth));
  }

  out << std::left << std::setw(7) << "alg" << std::setw(16) << "precision" << std::setw(16)
      << "percent_error" << std::setw(16) << "max_abs_rel" << "estimates_match\n";
  for (const auto& r : reports) {
    std::ostringstream pair;
    pair << to_string(r.measured) << "/" << to_string(r.ground_truth);
    out << std::left << std::setw(7) << to_string(r.algorithm) << std::setw(16) << pair.str()
        << std::setw(16) << std::setprecision(6) << r.percent_error << std::setw(16)
        << r.max_abs_relative << (r.estimates_match ? "yes" : "NO") << '\n';
  }
  const auto path = output_path(o, "accuracy.csv");
  auto f = open_out(path);
  write_accuracy_csv(f, reports);
  out << "report: " << path.string() << '\n';
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  RunConfig cfg = load(o);
  if (!o.alg) cfg.algorithms = {Algorithm::music};
  if (cfg.bench_repeats < 3) {
    throw Error(ErrorKind::invalid_parameter,
                "--repeats must be >= 3, got " + std::to_string(cfg.bench_repeats));
  }
  std::vector<AngleGrid> grids;
  for (const auto& [a, b] : cfg.bench_ranges) grids.push_back(AngleGrid::scan_range(a, b));

  BenchOptions options;
  options.repeats = cfg.bench_repeats;
  options.workers = cfg.workers;
  options.precision = cfg.precision == PrecisionMode::double_ ? Precision::double_
                                                              : Precision::single;

  const auto csv_path = output_path(o, "bench.csv");
  auto csv = open_out(csv_path);
  const auto json_path = output_path(o, "bench_env.json");
  auto sidecar = open_out(json_path);
  bool header = true;
  std::string env;
  for (Algorithm alg : cfg.algorithms) {
    const BenchReport report = bench_scan_ranges(cfg.scenario, grids, alg, options);
    std::ostringstream rows;
    write_bench_csv(rows, report);
    std::string text = rows.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    header = false;
    csv << text;
    out << text;
    env += environment_json(report) + "\n";
  }
  sidecar << env;
  out << "report: " << csv_path.string() << ", environment: " << json_path.string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-subspace DOA estimation (PHD, MUSIC, EV, MN)", "nssdoa"};
  app.require_subcommand(1);

  Options o;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON scenario/run config")->required();
    sub->add_option("--seed", o.seed, "Override the config seed");
    sub->add_option("--out", o.out_dir, "Output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "Generate a binary snapshot file");
  common(simulate);
  simulate->add_option("--precision", o.precision, "single|double");

  auto* estimate = app.add_subcommand("estimate", "Estimate DOAs and write spectra");
  common(estimate);
  estimate->add_option("--alg", o.alg, "phd|music|ev|mn|all");
  estimate->add_option("--precision", o.precision, "single|double|both");
  estimate->add_option("--workers", o.workers, "Scan workers: N or auto");
  estimate->add_option("--snapshots", o.snapshots, "Snapshot file instead of simulating");

  auto* validate = app.add_subcommand("validate", "Single vs double precision accuracy report");
  common(validate);
  validate->add_option("--alg", o.alg, "phd|music|ev|mn|all (default all)");
  validate->add_option("--precision", o.precision, "Measured precision: single|double");
  validate->add_option("--ground-truth", o.ground_truth, "Reference precision: single|double");

  auto* bench = app.add_subcommand("bench", "Scan-range timing, one worker vs many");
  common(bench);
  bench->add_option("--alg", o.alg, "phd|music|ev|mn|all (default music)");
  bench->add_option("--precision", o.precision, "single|double");
  bench->add_option("--workers", o.workers, "Multi-worker count: N or auto");
  bench->add_option("--ranges", o.ranges, "AxB[,AxB...]");
  bench->add_option("--repeats", o.repeats, "Timed repeats per setting (>= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nssdoa: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*estimate) return cmd_estimate(o, out);
    if (*validate) return cmd_validate(o, out);
    if (*bench) return cmd_bench(o, out);
  } catch (const Error& e) {
    err << "nssdoa: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return is_numerical(e.kind()) ? kNumericalError : kUsageError;
  } catch (const std::exception& e) {
    err << "nssdoa: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace doa::cli
