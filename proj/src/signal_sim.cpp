#include "doa/signal_sim.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "binary_io.hpp"
#include "doa/error.hpp"

namespace doa {

namespace {

constexpr const char* kMagic = "NSSDOA-SNAP";

[[noreturn]] void bad_scenario(const std::string& what) {
  throw Error(ErrorKind::invalid_scenario, what);
}

class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), stream};
    engine_.seed(seq);
  }

  // Circular complex Gaussian with E|z|^2 = variance.
  Complex<double> next(double variance) {
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-std::log(u1) * variance);
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  // (0, 1] from the top 53 bits.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
};

std::string format_snr(double snr_db) {
  if (std::isinf(snr_db)) return "inf";
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << snr_db;
  return s.str();
}

}  // namespace

void ScenarioConfig::validate() const {
  const std::size_t m = geometry.size();
  const std::size_t d = sources.size();
  if (d < 1) bad_scenario("scenario needs at least one source");
  if (d >= m) {
    bad_scenario("number of sources (" + std::to_string(d) + ") must be below the element count (" +
                 std::to_string(m) + ")");
  }
  if (num_snapshots < 1) bad_scenario("num_snapshots must be >= 1");
  if (!noiseless && !std::isfinite(snr_db)) bad_scenario("snr_db must be finite");
  for (const auto& s : sources) {
    if (!std::isfinite(s.azimuth_deg) || !std::isfinite(s.elevation_deg)) {
      bad_scenario("source angles must be finite");
    }
    if (!std::isfinite(s.power) || s.power <= 0) bad_scenario("source power must be positive");
  }
}

double ScenarioConfig::mean_source_power() const {
  double sum = 0;
  for (const auto& s : sources) sum += s.power;
  return sources.empty() ? 0.0 : sum / static_cast<double>(sources.size());
}

double ScenarioConfig::noise_variance() const {
  if (noiseless) return 0.0;
  return mean_source_power() / std::pow(10.0, snr_db / 10.0);
}

ComplexMatrix<double> source_steering_matrix(const ScenarioConfig& cfg) {
  const std::size_t m = cfg.geometry.size();
  const std::size_t d = cfg.sources.size();
  ComplexMatrix<double> a(m, d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto v = steering_vector<double>(cfg.geometry, cfg.sources[i].azimuth_deg,
                                           cfg.sources[i].elevation_deg);
    for (std::size_t k = 0; k < m; ++k) a(k, i) = v[k];
  }
  return a;
}

SnapshotMatrix<double> generate_snapshots(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.geometry.size();
  const std::size_t d = cfg.sources.size();
  const std::size_t n = cfg.num_snapshots;
  const ComplexMatrix<double> a = source_steering_matrix(cfg);

  ComplexMatrix<double> s(d, n);
  for (std::size_t i = 0; i < d; ++i) {
    GaussianStream rng(cfg.seed, static_cast<std::uint32_t>(i + 1));
    for (std::size_t t = 0; t < n; ++t) s(i, t) = rng.next(cfg.sources[i].power);
  }

  ComplexMatrix<double> x = matmul(a, s);
  if (!cfg.noiseless) {
    const double sigma2 = cfg.noise_variance();
    GaussianStream rng(cfg.seed, 0);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t k = 0; k < m; ++k) x(k, t) += rng.next(sigma2);
    }
  }
  const double snr = cfg.noiseless ? std::numeric_limits<double>::infinity() : cfg.snr_db;
  return {std::move(x), cfg.seed, snr, d};
}

SnapshotMatrix<float> quantize(const SnapshotMatrix<double>& x) {
  return {cast_matrix<float>(x.data), x.seed, x.snr_db, x.num_sources};
}

ComplexMatrix<double> asymptotic_covariance(const ScenarioConfig& cfg) {
  cfg.validate();
  const ComplexMatrix<double> a = source_steering_matrix(cfg);
  const std::size_t m = a.rows();
  ComplexMatrix<double> r(m, m);
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    const double p = cfg.sources[i].power;
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = 0; l < m; ++l) r(k, l) += p * a(k, i) * std::conj(a(l, i));
    }
  }
  const double sigma2 = cfg.noise_variance();
  for (std::size_t k = 0; k < m; ++k) r(k, k) += sigma2;
  return hermitian_part(r);
}

template <class T>
void write_snapshots(std::ostream& out, const SnapshotMatrix<T>& x) {
  out << kMagic << ' ' << kSnapshotFormatVersion << ' ' << x.elements() << ' ' << x.snapshots()
      << ' ' << to_string(precision_of<T>()) << ' ' << x.seed << ' ' << format_snr(x.snr_db) << ' '
      << x.num_sources << '\n';
  for (const auto& z : x.data.data()) {
    detail::write_scalar_le(out, z.real());
    detail::write_scalar_le(out, z.imag());
  }
  if (!out) throw Error(ErrorKind::io, "failed writing snapshot data");
}

LoadedSnapshots read_snapshots(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::io, "snapshot file is empty");
  std::istringstream fields(header);
  std::string magic, precision, snr;
  int version = 0;
  std::size_t m = 0, n = 0, d = 0;
  std::uint64_t seed = 0;
  if (!(fields >> magic >> version >> m >> n >> precision >> seed >> snr >> d) || magic != kMagic) {
    throw Error(ErrorKind::parse, "malformed snapshot header: '" + header + "'");
  }
  if (version != kSnapshotFormatVersion) {
    throw Error(ErrorKind::parse, "unsupported snapshot format version " + std::to_string(version));
  }
  if (m == 0 || n == 0) throw Error(ErrorKind::parse, "snapshot header has zero dimension");

  LoadedSnapshots out;
  out.precision = parse_precision(precision);
  out.snapshots.seed = seed;
  out.snapshots.num_sources = d;
  out.snapshots.snr_db =
      snr == "inf" ? std::numeric_limits<double>::infinity() : std::stod(snr);
  out.snapshots.data = ComplexMatrix<double>(m, n);
  for (auto& z : out.snapshots.data.data()) {
    if (out.precision == Precision::single) {
      const float re = detail::read_scalar_le<float>(in);
      const float im = detail::read_scalar_le<float>(in);
      z = {re, im};
    } else {
      const double re = detail::read_scalar_le<double>(in);
      const double im = detail::read_scalar_le<double>(in);
      z = {re, im};
    }
  }
  return out;
}

void save_snapshots(const std::string& path, const SnapshotMatrix<double>& x,
                    Precision precision) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  if (precision == Precision::single) {
    write_snapshots(out, quantize(x));
  } else {
    write_snapshots(out, x);
  }
}

LoadedSnapshots load_snapshots(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return read_snapshots(in);
}

template void write_snapshots<float>(std::ostream&, const SnapshotMatrix<float>&);
template void write_snapshots<double>(std::ostream&, const SnapshotMatrix<double>&);

}  // namespace doa
