// Acceptance gate. Each criterion prints one line:
//   [PASS|FAIL|SKIP] <n> <name>: <measured values>
// Usage: acceptance [criterion ...]   (no arguments runs all nine)
// Exit status: 0 all selected passed, 1 any failed, 77 nothing failed but
// something was skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doa/error.hpp"
#include "doa/evaluation.hpp"
#include "doa/pipeline.hpp"
#include "support.hpp"

using namespace doa;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

double azimuth_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

// 1. Single vs double percent error on the two-source scenario.
Outcome accuracy_class() {
  const auto t0 = Clock::now();
  const auto grid = testing::azimuth_ring();
  bool ok = true;
  std::ostringstream d;
  for (Algorithm alg : kAllAlgorithms) {
    const auto r = dual_precision_validate(testing::two_source_scenario(42), grid, alg, 2);
    ok = ok && r.percent_error <= 0.05 && r.estimates_match;
    d << to_string(alg) << " " << fmt(r.percent_error, 4) << "%"
      << (r.estimates_match ? "" : " (cells differ)") << ", ";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 30;
  d << "bound 0.05%, " << fmt(secs, 3) << " s";
  return {ok ? Verdict::pass : Verdict::fail, d.str()};
}

// 2. Both azimuths within one grid step on >= 95 of 100 seeds, all four
// algorithms.
Outcome correct_estimation() {
  const auto t0 = Clock::now();
  const auto grid = testing::azimuth_ring();
  const auto base = testing::two_source_scenario();
  const auto manifold = build_manifold<double>(base.geometry, grid);
  std::map<Algorithm, int> per_alg;
  std::vector<std::uint64_t> misses;
  int all_ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto draw = generate_snapshots(testing::two_source_scenario(seed));
    bool seed_ok = true;
    for (Algorithm alg : kAllAlgorithms) {
      const auto res = run_pipeline(draw.data, manifold, 2, alg);
      bool found = true;
      for (const auto& src : base.sources) {
        const bool hit = std::any_of(res.estimate.peaks.begin(), res.estimate.peaks.end(),
                                     [&](const DoaPeak& p) {
                                       return azimuth_distance(p.azimuth_deg, src.azimuth_deg) <= 1.0;
                                     });
        found = found && hit;
      }
      per_alg[alg] += found;
      seed_ok = seed_ok && found;
    }
    all_ok += seed_ok;
    if (!seed_ok) misses.push_back(seed);
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << all_ok << "/100 seeds with all four correct (need 95); ";
  for (Algorithm alg : kAllAlgorithms) d << to_string(alg) << " " << per_alg[alg] << ", ";
  if (!misses.empty()) {
    d << "missed seeds";
    for (auto s : misses) d << " " << s;
    d << ", ";
  }
  d << fmt(secs, 3) << " s";
  return {all_ok >= 95 && secs < 120 ? Verdict::pass : Verdict::fail, d.str()};
}

// 3. Exact-subspace projectors annihilate the true steering vectors and the
// scan peaks land on the true cells.
Outcome subspace_oracle() {
  const auto grid = testing::azimuth_ring();
  auto cfg = testing::two_source_scenario();
  const auto manifold = build_manifold<double>(cfg.geometry, grid);
  const std::set<std::size_t> truth{30, 120};

  bool ok = true;
  double worst = 0;
  std::ostringstream d;
  auto check = [&](const ComplexMatrix<double>& r, std::span<const Algorithm> algs,
                   const char* label) {
    for (Algorithm alg : algs) {
      const auto p = noise_projector(CovarianceMatrix<double>{r, 0}, 2, alg);
      const double norm = frobenius_norm(p.c);
      for (const auto& s : cfg.sources) {
        const auto a = steering_vector<double>(cfg.geometry, s.azimuth_deg, s.elevation_deg);
        const double ratio = vector_norm<double>(matvec(p.c, std::span<const Complex<double>>(a))) / norm;
        worst = std::max(worst, ratio);
        ok = ok && ratio <= 1e-10;
      }
      const auto est = select_doa(find_peaks(scan(manifold, p)), 2, grid);
      std::set<std::size_t> cells;
      for (const auto& pk : est.peaks) cells.insert(pk.grid_index);
      if (cells != truth) {
        ok = false;
        d << label << " " << to_string(alg) << " peaks off-cell; ";
      }
    }
  };
  const std::array<Algorithm, 3> noiseless_algs{Algorithm::phd, Algorithm::music, Algorithm::mn};
  cfg.noiseless = true;
  check(asymptotic_covariance(cfg), noiseless_algs, "noiseless");
  cfg.noiseless = false;
  check(asymptotic_covariance(cfg), kAllAlgorithms, "noise-floor");
  d << "max ||C a|| / ||C||_F = " << fmt(worst, 3) << " (bound 1e-10), peaks on 30/120";
  return {ok ? Verdict::pass : Verdict::fail, d.str()};
}

// 4. Decomposition residuals over 1000 random PSD matrices.
Outcome decomposition_residuals() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  double worst_f = 0, worst_d = 0;
  int failures = 0;
  int max_sweeps = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_psd<double>(8, rng);
    const auto af = cast_matrix<float>(a);
    try {
      const auto rd = hermitian_svd(a);
      const auto rf = hermitian_svd(af);
      worst_d = std::max(worst_d, svd_residual(a, rd) / frobenius_norm(a));
      worst_f = std::max(worst_f, static_cast<double>(svd_residual(af, rf) / frobenius_norm(af)));
      max_sweeps = std::max({max_sweeps, rd.sweeps, rf.sweeps});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_convergence) throw;
      ++failures;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_f <= 1.882e-5 && worst_d <= 1e-12 && failures == 0 && secs < 10;
  return {ok ? Verdict::pass : Verdict::fail,
          "max residual/||A||_F single " + fmt(worst_f, 3) + " (bound 1.882e-05), double " +
              fmt(worst_d, 3) + " (bound 1e-12), no-convergence " + std::to_string(failures) +
              ", max sweeps " + std::to_string(max_sweeps) + ", " + fmt(secs, 3) + " s"};
}

// 5. Worker-count independence on the 360x90 grid.
template <class T>
bool bitwise_workers(const ComplexMatrix<double>& x, const ArrayGeometry& geom,
                     const AngleGrid& grid, int& compared) {
  const auto manifold = build_manifold<T>(geom, grid);
  const auto cov = sample_covariance(cast_matrix<T>(x));
  bool ok = true;
  for (Algorithm alg : kAllAlgorithms) {
    const auto p = noise_projector(cov, 2, alg);
    const auto ref = scan(manifold, p, WorkerCount::fixed(1));
    for (std::size_t w : {2, 4, 8}) {
      const auto other = scan(manifold, p, WorkerCount::fixed(w));
      ok = ok && std::memcmp(ref.values.data(), other.values.data(),
                             sizeof(T) * ref.values.size()) == 0;
      ++compared;
    }
  }
  return ok;
}

Outcome parallel_determinism() {
  const auto cfg = testing::two_source_scenario(42);
  const auto grid = AngleGrid::scan_range(360, 90);
  const auto x = generate_snapshots(cfg).data;
  int compared = 0;
  const bool ok = bitwise_workers<float>(x, cfg.geometry, grid, compared) &&
                  bitwise_workers<double>(x, cfg.geometry, grid, compared);
  return {ok ? Verdict::pass : Verdict::fail,
          std::to_string(compared) +
              " scans (4 algorithms x workers {2,4,8} vs 1, single and double) bitwise "
              "identical to the single-worker scan"};
}

// 6. Speedup trend over scan ranges; needs at least four cores.
Outcome scaling_trend() {
  const auto cfg = testing::two_source_scenario(42);
  std::vector<AngleGrid> ranges;
  for (std::size_t b : {1, 30, 60, 90}) ranges.push_back(AngleGrid::scan_range(360, b));
  BenchOptions o;
  o.repeats = 5;
  o.workers = WorkerCount::automatic();
  const auto report = bench_scan_ranges(cfg, ranges, Algorithm::music, o);
  std::ostringstream d;
  bool monotone = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    d << "360x" << r.el_count << " " << fmt(r.single_ms, 4) << "/" << fmt(r.multi_ms, 4)
      << " ms x" << fmt(r.speedup, 3) << ", ";
    if (i > 0) monotone = monotone && r.speedup >= report.rows[i - 1].speedup;
  }
  const unsigned cores = report.environment.logical_cores;
  d << cores << " logical core(s), " << report.rows.front().workers << " worker(s)";
  if (cores < 4) {
    return {Verdict::skip, d.str() + "; criterion applies to machines with >= 4 cores"};
  }
  const bool ok = monotone && report.rows.back().speedup >= 2.0;
  return {ok ? Verdict::pass : Verdict::fail, d.str()};
}

// 7. Scan share of the post-manifold pipeline, measured and modelled.
Outcome hotspot_share() {
  const auto cfg = testing::two_source_scenario(42);
  const auto grid = AngleGrid::scan_range(360, 90);
  const auto manifold = build_manifold<float>(cfg.geometry, grid);
  const auto x = quantize(generate_snapshots(cfg)).data;
  run_pipeline(x, manifold, 2, Algorithm::music);  // warm-up
  double scan_ms = 0, total_ms = 0;
  for (int r = 0; r < 5; ++r) {
    const auto t = run_pipeline(x, manifold, 2, Algorithm::music).estimate.timings;
    scan_ms += t.scan_ms;
    total_ms += t.total_ms();
  }
  const double measured = scan_ms / total_ms;
  const double modelled =
      step_costs({8, static_cast<std::int64_t>(cfg.num_snapshots), 2,
                  static_cast<std::int64_t>(grid.size())})
          .step5_share();
  const bool ok = measured >= 0.80 && modelled > 0.90;
  return {ok ? Verdict::pass : Verdict::fail,
          "measured scan share " + fmt(100 * measured, 4) + "% (need >= 80%), cost model " +
              fmt(100 * modelled, 6) + "% (need > 90%)"};
}

// 8. Operation counts against the printed formulas.
Outcome cost_model_fidelity() {
  std::mt19937_64 rng(77);
  int mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    const long double m = 2 + rng() % 127;
    const long double n = 1 + rng() % 8192;
    const long double d = 1 + rng() % static_cast<std::uint64_t>(m - 1);
    const long double l = 1 + rng() % 1'000'000;
    const auto c = step_costs({static_cast<std::int64_t>(m), static_cast<std::int64_t>(n),
                               static_cast<std::int64_t>(d), static_cast<std::int64_t>(l)});
    const bool same =
        static_cast<long double>(c.step1) == (3 * m * m * n + m * n) / 2 &&
        static_cast<long double>(c.step2_3) == 12 * m * m * m &&
        static_cast<long double>(c.step4) == m * m * m + (0.5L - d) * m * m - (0.5L + d) * m &&
        static_cast<long double>(c.step5) == l * (2 * n * n + n) &&
        std::abs(c.step6 - static_cast<double>(l * std::log(l))) <= 1e-12 * std::max(1.0, c.step6);
    mismatches += !same;
  }
  return {mismatches == 0 ? Verdict::pass : Verdict::fail,
          std::to_string(20 - mismatches) + "/20 random (M, N, D, L) tuples match"};
}

// 9. Property suites, 200 randomized cases each.
std::vector<Peak> peaks_oracle(const AngleGrid& g, const std::vector<double>& v) {
  const long naz = static_cast<long>(g.azimuth_count());
  const long nel = static_cast<long>(g.elevation_count());
  std::vector<Peak> out;
  for (long i = 0; i < naz; ++i) {
    for (long j = 0; j < nel; ++j) {
      const long self = i * nel + j;
      bool peak = true;
      for (long di = -1; di <= 1 && peak; ++di) {
        for (long dj = -1; dj <= 1 && peak; ++dj) {
          long ii = i + di;
          const long jj = j + dj;
          if (jj < 0 || jj >= nel) continue;
          if (g.azimuth_wraps()) ii = (ii + naz) % naz;
          if (ii < 0 || ii >= naz || ii * nel + jj == self) continue;
          peak = v[static_cast<std::size_t>(self)] > v[static_cast<std::size_t>(ii * nel + jj)];
        }
      }
      if (peak) out.push_back({static_cast<std::size_t>(self), v[static_cast<std::size_t>(self)]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) {
    return a.value != b.value ? a.value > b.value : a.index < b.index;
  });
  return out;
}

int eigen_rank(const ComplexMatrix<double>& c) {
  const auto e = testing::oracle_eigh(c);
  const long double cut = rank_tolerance<double>() * frobenius_norm(c);
  return static_cast<int>((e.values.array() > cut).count());
}

Outcome property_suites() {
  std::mt19937_64 rng(9001);
  std::map<std::string, int> failed;
  const char* names[] = {"music-idempotent", "phd-rank1", "mn-rank1", "ev-reciprocal",
                         "percent-scale", "peak-oracle"};
  for (const char* n : names) failed[n] = 0;

  for (int trial = 0; trial < 200; ++trial) {
    auto r = testing::random_psd<double>(8, rng);
    for (std::size_t k = 0; k < 8; ++k) r(k, k) += 0.1;
    const std::size_t d = 1 + rng() % 6;
    const auto svd = hermitian_svd(r);
    const auto music = projector_from_decomposition(svd, d, Algorithm::music).c;
    failed["music-idempotent"] += frobenius_norm(matmul(music, music) - music) > 1e-12;
    failed["phd-rank1"] += eigen_rank(projector_from_decomposition(svd, d, Algorithm::phd).c) != 1;
    failed["mn-rank1"] += eigen_rank(projector_from_decomposition(svd, d, Algorithm::mn).c) != 1;

    const auto ev = testing::oracle_eigh(projector_from_decomposition(svd, d, Algorithm::ev).c);
    std::vector<long double> want;
    for (std::size_t k = d; k < 8; ++k) want.push_back(1.0L / (svd.s[k] * svd.s[k]));
    std::sort(want.begin(), want.end());
    bool ev_ok = true;
    for (std::size_t k = 0; k < want.size(); ++k) {
      ev_ok = ev_ok && std::abs(ev.values(static_cast<Eigen::Index>(d + k)) - want[k]) <=
                           1e-6L * want[k];
    }
    failed["ev-reciprocal"] += !ev_ok;
  }

  std::uniform_real_distribution<double> val(0.01, 100.0), jitter(-0.01, 0.01), lg(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    std::vector<double> g(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = val(rng) * (rng() % 2 ? 1 : -1);
      y[i] = g[i] * (1 + jitter(rng));
    }
    const double k = std::pow(10.0, lg(rng)) * (rng() % 2 ? 1 : -1);
    std::vector<double> gk(g), yk(y);
    for (auto& v : gk) v *= k;
    for (auto& v : yk) v *= k;
    const double a = percent_error(y, g), b = percent_error(yk, gk);
    failed["percent-scale"] += std::abs(a - b) > 1e-12 * std::max(a, 1e-300);
  }

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t naz = 3 + rng() % 30, nel = 1 + rng() % 8;
    const bool full = trial % 4 != 0;
    std::vector<double> az(naz), el(nel);
    for (std::size_t i = 0; i < naz; ++i) az[i] = full ? 360.0 * i / naz : static_cast<double>(i);
    for (std::size_t j = 0; j < nel; ++j) el[j] = static_cast<double>(91 - nel + j);
    const AngleGrid grid(az, el);
    std::vector<double> v(grid.size());
    for (auto& x : v) x = static_cast<double>(rng() % 5);
    const auto got = find_peaks(grid, v);
    const auto want = peaks_oracle(grid, v);
    bool same = got.size() == want.size() && grid.azimuth_wraps() == full;
    for (std::size_t k = 0; same && k < got.size(); ++k) {
      same = got[k].index == want[k].index && got[k].value == want[k].value;
    }
    failed["peak-oracle"] += !same;
  }

  int total = 0;
  std::ostringstream d;
  for (const char* n : names) {
    total += failed[n];
    d << n << " " << 200 - failed[n] << "/200, ";
  }
  std::string s = d.str();
  s.resize(s.size() - 2);
  return {total == 0 ? Verdict::pass : Verdict::fail, s};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "single-vs-double accuracy", accuracy_class},
      {2, "correct estimation over 100 seeds", correct_estimation},
      {3, "subspace oracle equivalence", subspace_oracle},
      {4, "decomposition residuals", decomposition_residuals},
      {5, "parallel determinism", parallel_determinism},
      {6, "scaling trend", scaling_trend},
      {7, "hotspot share", hotspot_share},
      {8, "cost-model fidelity", cost_model_fidelity},
      {9, "property suites", property_suites},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  bool any_fail = false, any_skip = false;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::cout << "[" << tag << "] " << c.id << " " << c.name << ": " << o.detail << std::endl;
    any_fail = any_fail || o.verdict == Verdict::fail;
    any_skip = any_skip || o.verdict == Verdict::skip;
  }
  if (any_fail) return 1;
  return any_skip ? 77 : 0;
}
