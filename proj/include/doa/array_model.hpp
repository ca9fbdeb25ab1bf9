#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "doa/linalg.hpp"

namespace doa {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct Position {
  double x = 0;
  double y = 0;
  double z = 0;
};

// Sensor positions in meters plus the carrier wavelength.
class ArrayGeometry {
 public:
  ArrayGeometry(std::vector<Position> positions, double wavelength_m);

  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const Position> positions() const noexcept { return positions_; }
  double wavelength() const noexcept { return wavelength_; }

 private:
  std::vector<Position> positions_;
  double wavelength_;
};

// Element k sits at (r cos(2 pi k/m), r sin(2 pi k/m), 0): element 0 on +x,
// counter-clockwise.
ArrayGeometry uniform_circular_array(std::size_t num_elements, double radius_m,
                                     double carrier_hz);

double wavelength_for(double carrier_hz);

// Azimuth x elevation scan lattice in degrees. Flat index is azimuth-major:
// index = i_az * elevation_count + i_el.
class AngleGrid {
 public:
  AngleGrid(std::vector<double> azimuth_deg, std::vector<double> elevation_deg);

  // Inclusive arithmetic ranges, e.g. (0, 359, 1) -> 360 values.
  static AngleGrid from_ranges(double az_start, double az_stop, double az_step, double el_start,
                               double el_stop, double el_step);

  // "A x B" scan range: A azimuths evenly covering [0, 360) and B elevations
  // ending at 90 (91-B .. 90, unit step).
  static AngleGrid scan_range(std::size_t az_count, std::size_t el_count);

  std::span<const double> azimuths() const noexcept { return azimuth_; }
  std::span<const double> elevations() const noexcept { return elevation_; }
  std::size_t azimuth_count() const noexcept { return azimuth_.size(); }
  std::size_t elevation_count() const noexcept { return elevation_.size(); }
  std::size_t size() const noexcept { return azimuth_.size() * elevation_.size(); }

  std::size_t index(std::size_t i_az, std::size_t i_el) const noexcept {
    return i_az * elevation_.size() + i_el;
  }
  double azimuth_at(std::size_t flat) const noexcept { return azimuth_[flat / elevation_.size()]; }
  double elevation_at(std::size_t flat) const noexcept {
    return elevation_[flat % elevation_.size()];
  }

  // True when the azimuth samples are uniform and the last one is one step
  // short of a full turn, so 0 and the last azimuth are neighbours.
  bool azimuth_wraps() const noexcept;

  bool operator==(const AngleGrid&) const = default;

 private:
  std::vector<double> azimuth_;
  std::vector<double> elevation_;
};

/// Steering vector of the array toward (azimuth, elevation), both in degrees.
///
/// Component k is exp{j (2 pi / lambda) (x_k sin(az) sin(el) + y_k cos(az)
/// sin(el) + z_k cos(el))}. The elevation is measured from +z, so 90 degrees
/// lies in the array plane. Azimuth is reduced to [0, 360) first; the phase is
/// always evaluated in double and rounded to T at the end.
template <class T>
ComplexVector<T> steering_vector(const ArrayGeometry& geom, double azimuth_deg,
                                 double elevation_deg);

// Precomputed steering vectors for every grid point, contiguous, one
// length-m block per flat grid index.
template <class T>
class ManifoldTable {
 public:
  ManifoldTable(AngleGrid grid, std::size_t elements, std::vector<Complex<T>> vectors);

  const AngleGrid& grid() const noexcept { return grid_; }
  std::size_t elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const Complex<T>> vector(std::size_t flat) const noexcept {
    return {vectors_.data() + flat * elements_, elements_};
  }
  std::span<const Complex<T>> data() const noexcept { return vectors_; }
  static constexpr Precision precision() noexcept { return precision_of<T>(); }

 private:
  AngleGrid grid_;
  std::size_t elements_;
  std::vector<Complex<T>> vectors_;
};

template <class T>
ManifoldTable<T> build_manifold(const ArrayGeometry& geom, const AngleGrid& grid);

}  // namespace doa
