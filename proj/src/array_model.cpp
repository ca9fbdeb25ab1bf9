#include "doa/array_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "doa/error.hpp"

namespace doa {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::invalid_parameter, what);
}

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::vector<double> arithmetic_range(double start, double stop, double step, const char* axis) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || step <= 0 ||
      stop < start) {
    invalid(std::string(axis) + " range must satisfy start <= stop and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

void check_axis(const std::vector<double>& v, double lo, bool lo_open, double hi, bool hi_open,
                const char* axis) {
  if (v.empty()) invalid(std::string(axis) + " axis is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    const bool below = lo_open ? x <= lo : x < lo;
    const bool above = hi_open ? x >= hi : x > hi;
    if (!std::isfinite(x) || below || above) {
      invalid(std::string(axis) + " value " + std::to_string(x) + " out of range");
    }
    if (i > 0 && !(v[i - 1] < x)) invalid(std::string(axis) + " values must be strictly ascending");
  }
}

template <class T>
void fill_steering(const ArrayGeometry& geom, double azimuth_deg, double elevation_deg,
                   std::span<Complex<T>> out) {
  if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg)) {
    invalid("steering angles must be finite");
  }
  double az = std::fmod(azimuth_deg, 360.0);
  if (az < 0) az += 360.0;
  const double theta = az * kDegToRad;
  const double phi = elevation_deg * kDegToRad;
  const double sin_phi = std::sin(phi);
  const double ux = std::sin(theta) * sin_phi;
  const double uy = std::cos(theta) * sin_phi;
  const double uz = std::cos(phi);
  const double wavenumber = 2.0 * std::numbers::pi / geom.wavelength();

  const auto pos = geom.positions();
  for (std::size_t k = 0; k < pos.size(); ++k) {
    const double phase = wavenumber * (pos[k].x * ux + pos[k].y * uy + pos[k].z * uz);
    out[k] = Complex<T>(static_cast<T>(std::cos(phase)), static_cast<T>(std::sin(phase)));
  }
}

}  // namespace

ArrayGeometry::ArrayGeometry(std::vector<Position> positions, double wavelength_m)
    : positions_(std::move(positions)), wavelength_(wavelength_m) {
  if (positions_.size() < 2) invalid("array needs at least 2 elements");
  if (!std::isfinite(wavelength_) || wavelength_ <= 0) invalid("wavelength must be positive");
  for (const auto& p : positions_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      invalid("element coordinates must be finite");
    }
  }
}

double wavelength_for(double carrier_hz) {
  if (!std::isfinite(carrier_hz) || carrier_hz <= 0) invalid("carrier frequency must be positive");
  return kSpeedOfLight / carrier_hz;
}

ArrayGeometry uniform_circular_array(std::size_t num_elements, double radius_m,
                                     double carrier_hz) {
  if (num_elements < 2) invalid("uniform circular array needs at least 2 elements");
  if (!std::isfinite(radius_m) || radius_m <= 0) invalid("radius must be positive");
  const double wavelength = wavelength_for(carrier_hz);

  std::vector<Position> pos(num_elements);
  const double m = static_cast<double>(num_elements);
  for (std::size_t k = 0; k < num_elements; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / m;
    pos[k] = {radius_m * std::cos(angle), radius_m * std::sin(angle), 0.0};
  }
  return {std::move(pos), wavelength};
}

AngleGrid::AngleGrid(std::vector<double> azimuth_deg, std::vector<double> elevation_deg)
    : azimuth_(std::move(azimuth_deg)), elevation_(std::move(elevation_deg)) {
  check_axis(azimuth_, 0.0, false, 360.0, true, "azimuth");
  check_axis(elevation_, 0.0, true, 90.0, false, "elevation");
}

AngleGrid AngleGrid::from_ranges(double az_start, double az_stop, double az_step, double el_start,
                                 double el_stop, double el_step) {
  return {arithmetic_range(az_start, az_stop, az_step, "azimuth"),
          arithmetic_range(el_start, el_stop, el_step, "elevation")};
}

AngleGrid AngleGrid::scan_range(std::size_t az_count, std::size_t el_count) {
  if (az_count == 0 || el_count == 0 || el_count > 90) {
    invalid("scan range needs az_count >= 1 and 1 <= el_count <= 90");
  }
  std::vector<double> az(az_count);
  const double step = 360.0 / static_cast<double>(az_count);
  for (std::size_t i = 0; i < az_count; ++i) az[i] = static_cast<double>(i) * step;
  std::vector<double> el(el_count);
  for (std::size_t j = 0; j < el_count; ++j) el[j] = static_cast<double>(91 - el_count + j);
  return {std::move(az), std::move(el)};
}

bool AngleGrid::azimuth_wraps() const noexcept {
  const std::size_t n = azimuth_.size();
  if (n < 3) return false;
  const double step = azimuth_[1] - azimuth_[0];
  constexpr double tol = 1e-9;
  for (std::size_t i = 2; i < n; ++i) {
    if (std::abs(azimuth_[i] - azimuth_[i - 1] - step) > tol) return false;
  }
  return std::abs(azimuth_.front() + 360.0 - azimuth_.back() - step) <= tol;
}

template <class T>
ComplexVector<T> steering_vector(const ArrayGeometry& geom, double azimuth_deg,
                                 double elevation_deg) {
  ComplexVector<T> out(geom.size());
  fill_steering<T>(geom, azimuth_deg, elevation_deg, out);
  return out;
}

template <class T>
ManifoldTable<T>::ManifoldTable(AngleGrid grid, std::size_t elements,
                                std::vector<Complex<T>> vectors)
    : grid_(std::move(grid)), elements_(elements), vectors_(std::move(vectors)) {
  if (vectors_.size() != grid_.size() * elements_) {
    throw Error(ErrorKind::dimension_mismatch, "manifold size must equal grid size times m");
  }
}

template <class T>
ManifoldTable<T> build_manifold(const ArrayGeometry& geom, const AngleGrid& grid) {
  const std::size_t m = geom.size();
  std::vector<Complex<T>> vectors(grid.size() * m);
  for (std::size_t i = 0; i < grid.azimuth_count(); ++i) {
    for (std::size_t j = 0; j < grid.elevation_count(); ++j) {
      const std::size_t flat = grid.index(i, j);
      fill_steering<T>(geom, grid.azimuths()[i], grid.elevations()[j],
                       std::span<Complex<T>>(vectors.data() + flat * m, m));
    }
  }
  return {grid, m, std::move(vectors)};
}

template ComplexVector<float> steering_vector<float>(const ArrayGeometry&, double, double);
template ComplexVector<double> steering_vector<double>(const ArrayGeometry&, double, double);
template class ManifoldTable<float>;
template class ManifoldTable<double>;
template ManifoldTable<float> build_manifold<float>(const ArrayGeometry&, const AngleGrid&);
template ManifoldTable<double> build_manifold<double>(const ArrayGeometry&, const AngleGrid&);

}  // namespace doa
