#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/subspace.hpp"

namespace doa {

// Number of scan workers; automatic resolves to the logical core count.
class WorkerCount {
 public:
  static WorkerCount automatic() noexcept { return WorkerCount(0); }
  static WorkerCount fixed(std::size_t n);
  // "auto" or a positive integer.
  static WorkerCount parse(std::string_view text);

  bool is_automatic() const noexcept { return n_ == 0; }
  std::size_t resolve() const noexcept;

 private:
  explicit WorkerCount(std::size_t n) : n_(n) {}
  std::size_t n_;
};

template <class T>
struct PseudoSpectrum {
  AngleGrid grid;
  std::vector<T> values;  // flat grid order
  Algorithm algorithm = Algorithm::music;

  static constexpr Precision precision() noexcept { return precision_of<T>(); }
};

template <class T>
constexpr T spectrum_floor() noexcept {
  if constexpr (std::is_same_v<T, float>) {
    return T(1e-18);
  } else {
    return T(1e-30);
  }
}

/// P = 1 / max(Re(a^H C a), floor) at every grid point.
///
/// The grid is split into one contiguous chunk per worker; the per-point
/// arithmetic is identical to the sequential path, so the output is bitwise
/// independent of the worker count. Throws dimension-mismatch when the
/// manifold length differs from C, and not-psd if a^H C a falls below
/// -m tol ||C||_F.
template <class T>
PseudoSpectrum<T> scan(const ManifoldTable<T>& manifold, const NoiseProjector<T>& projector,
                       WorkerCount workers = WorkerCount::fixed(1));

struct Peak {
  std::size_t index = 0;  // flat grid index
  double value = 0;
};

// Strict local maxima over the 8-neighbourhood. Azimuth wraps when the grid
// covers the full circle; elevation is clamped. Sorted by value descending,
// then by flat index ascending.
template <class T>
std::vector<Peak> find_peaks(const PseudoSpectrum<T>& spectrum);

std::vector<Peak> find_peaks(const AngleGrid& grid, std::span<const double> values);

struct DoaPeak {
  double azimuth_deg = 0;
  double elevation_deg = 0;
  double power = 0;
  std::size_t grid_index = 0;
};

struct StepTimings {
  double covariance_ms = 0;
  double decomposition_ms = 0;  // SVD plus noise-subspace selection
  double projector_ms = 0;
  double scan_ms = 0;
  double peaks_ms = 0;

  double total_ms() const noexcept {
    return covariance_ms + decomposition_ms + projector_ms + scan_ms + peaks_ms;
  }
};

struct DoaEstimate {
  std::vector<DoaPeak> peaks;
  Algorithm algorithm = Algorithm::music;
  std::size_t requested = 0;
  bool underdetermined = false;  // fewer than `requested` peaks found
  std::size_t az_count = 0;
  std::size_t el_count = 0;
  std::uint64_t seed = 0;
  StepTimings timings;
};

DoaEstimate select_doa(std::span<const Peak> peaks, std::size_t model_order,
                       const AngleGrid& grid);

// azimuth_deg,elevation_deg,power
template <class T>
void write_spectrum_csv(std::ostream& out, const PseudoSpectrum<T>& spectrum);

// ASCII header line
//   NSSDOA-SPEC <version> <az_count> <el_count> <single|double> <algorithm>\n
// then azimuths and elevations as little-endian float64, then the L values
// as little-endian reals of the stated precision, flat grid order.
template <class T>
void write_spectrum_binary(std::ostream& out, const PseudoSpectrum<T>& spectrum);

struct LoadedSpectrum {
  Precision precision = Precision::double_;
  PseudoSpectrum<double> spectrum;
};

LoadedSpectrum read_spectrum_binary(std::istream& in);

}  // namespace doa
