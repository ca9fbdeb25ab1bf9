#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/linalg.hpp"

namespace doa {

struct SourceSpec {
  double azimuth_deg = 0;
  double elevation_deg = 90;
  double power = 1.0;  // linear
};

// SNR is the per-element ratio of the mean source power to the noise
// variance. sampling_hz and num_paths are carried for config compatibility
// only; the narrowband model does not use them.
struct ScenarioConfig {
  ArrayGeometry geometry;
  std::vector<SourceSpec> sources;
  double snr_db = 15.0;
  bool noiseless = false;
  std::size_t num_snapshots = 128;
  std::uint64_t seed = 0;
  double sampling_hz = 0;
  int num_paths = 0;

  // Throws invalid-scenario.
  void validate() const;
  double mean_source_power() const;
  // Zero when noiseless.
  double noise_variance() const;
};

template <class T>
struct SnapshotMatrix {
  ComplexMatrix<T> data;  // m x N, column t is X(t_t)
  std::uint64_t seed = 0;
  double snr_db = 0;  // +inf for noiseless data
  std::size_t num_sources = 0;

  std::size_t elements() const noexcept { return data.rows(); }
  std::size_t snapshots() const noexcept { return data.cols(); }
};

// Random stream layout: stream 0 drives the noise, stream i+1 drives source
// i. Every stream is an independent std::mt19937_64 seeded through
// std::seed_seq{seed_lo, seed_hi, stream}, so adding a source never perturbs
// the noise draws. Complex Gaussians come from Box-Muller, one pair per
// sample (real, imaginary).
SnapshotMatrix<double> generate_snapshots(const ScenarioConfig& cfg);

// Rounds every entry to single precision.
SnapshotMatrix<float> quantize(const SnapshotMatrix<double>& x);

// A diag(p) A^H + sigma^2 I, symmetrized.
ComplexMatrix<double> asymptotic_covariance(const ScenarioConfig& cfg);

// Array manifold matrix A (m x d) for the configured sources.
ComplexMatrix<double> source_steering_matrix(const ScenarioConfig& cfg);

// Binary snapshot file: one ASCII header line
//   NSSDOA-SNAP <version> <m> <N> <single|double> <seed> <snr_db|inf> <d>\n
// followed by m*N little-endian (re, im) pairs, row-major.
inline constexpr int kSnapshotFormatVersion = 1;

template <class T>
void write_snapshots(std::ostream& out, const SnapshotMatrix<T>& x);

struct LoadedSnapshots {
  Precision precision = Precision::double_;
  SnapshotMatrix<double> snapshots;  // single-precision files are widened exactly
};

LoadedSnapshots read_snapshots(std::istream& in);

void save_snapshots(const std::string& path, const SnapshotMatrix<double>& x,
                    Precision precision);
LoadedSnapshots load_snapshots(const std::string& path);

}  // namespace doa
