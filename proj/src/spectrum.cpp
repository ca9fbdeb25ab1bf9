#include "doa/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "binary_io.hpp"
#include "doa/error.hpp"

namespace doa {

WorkerCount WorkerCount::fixed(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "worker count must be >= 1");
  return WorkerCount(n);
}

WorkerCount WorkerCount::parse(std::string_view text) {
  if (text == "auto") return automatic();
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || ptr != text.data() + text.size() || n == 0) {
    throw Error(ErrorKind::invalid_parameter,
                "workers must be 'auto' or a positive integer, got '" + std::string(text) + "'");
  }
  return WorkerCount(n);
}

std::size_t WorkerCount::resolve() const noexcept {
  if (n_ != 0) return n_;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace {

// Same accumulation order as quadratic_form: row k of C against a, then
// conj(a_k), k ascending.
template <class T>
inline Complex<T> form_kernel(const Complex<T>* a, const Complex<T>* c, std::size_t m) {
  Complex<T> total{};
  for (std::size_t k = 0; k < m; ++k) {
    const Complex<T>* row = c + k * m;
    Complex<T> acc{};
    for (std::size_t l = 0; l < m; ++l) acc += row[l] * a[l];
    total += std::conj(a[k]) * acc;
  }
  return total;
}

template <class T>
void scan_chunk(const ManifoldTable<T>& manifold, const ComplexMatrix<T>& c, T slack,
                std::size_t begin, std::size_t end, std::span<T> out) {
  const std::size_t m = manifold.elements();
  const Complex<T>* cdata = c.data().data();
  const Complex<T>* adata = manifold.data().data();
  constexpr T floor = spectrum_floor<T>();
  for (std::size_t idx = begin; idx < end; ++idx) {
    const Complex<T> q = form_kernel(adata + idx * m, cdata, m);
    const T re = q.real();
    if (std::abs(q.imag()) > T(1e-6) * std::abs(re) + slack) {
      throw Error(ErrorKind::not_hermitian, "projector quadratic form has imaginary residue " +
                                                std::to_string(q.imag()) + " at grid index " +
                                                std::to_string(idx));
    }
    if (re < -slack) {
      throw Error(ErrorKind::not_psd, "projector is not PSD: a^H C a = " + std::to_string(re) +
                                          " at grid index " + std::to_string(idx));
    }
    out[idx] = T(1) / std::max(re, floor);
  }
}

}  // namespace

template <class T>
PseudoSpectrum<T> scan(const ManifoldTable<T>& manifold, const NoiseProjector<T>& projector,
                       WorkerCount workers) {
  const auto& c = projector.c;
  const std::size_t m = manifold.elements();
  if (c.rows() != m || c.cols() != m) {
    throw Error(ErrorKind::dimension_mismatch,
                "manifold vectors have length " + std::to_string(m) + " but projector is " +
                    std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  }
  const std::size_t total = manifold.size();
  const T slack = static_cast<T>(m) * rank_tolerance<T>() * frobenius_norm(c);

  PseudoSpectrum<T> out{manifold.grid(), std::vector<T>(total), projector.algorithm};
  std::span<T> values(out.values);

  const std::size_t n = std::min(workers.resolve(), std::max<std::size_t>(total, 1));
  if (n <= 1) {
    scan_chunk(manifold, c, slack, 0, total, values);
    return out;
  }

  const std::size_t chunk = (total + n - 1) / n;
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(n - 1);
    for (std::size_t w = 1; w < n; ++w) {
      const std::size_t begin = std::min(total, w * chunk);
      const std::size_t end = std::min(total, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          scan_chunk(manifold, c, slack, begin, end, values);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    try {
      scan_chunk(manifold, c, slack, 0, std::min(total, chunk), values);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<Peak> find_peaks(const AngleGrid& grid, std::span<const double> values) {
  const std::size_t n_az = grid.azimuth_count();
  const std::size_t n_el = grid.elevation_count();
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::dimension_mismatch, "spectrum length does not match grid");
  }
  const bool wrap = grid.azimuth_wraps();

  std::vector<Peak> peaks;
  for (std::size_t i = 0; i < n_az; ++i) {
    for (std::size_t j = 0; j < n_el; ++j) {
      const std::size_t self = grid.index(i, j);
      const double v = values[self];
      bool is_peak = true;
      bool has_neighbour = false;
      for (int di = -1; di <= 1 && is_peak; ++di) {
        std::size_t ni;
        if (wrap) {
          ni = (i + n_az + static_cast<std::size_t>(di + 1) - 1) % n_az;
        } else {
          if ((di < 0 && i == 0) || (di > 0 && i + 1 == n_az)) continue;
          ni = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + di);
        }
        for (int dj = -1; dj <= 1; ++dj) {
          if ((dj < 0 && j == 0) || (dj > 0 && j + 1 == n_el)) continue;
          const std::size_t nj = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) + dj);
          const std::size_t other = grid.index(ni, nj);
          if (other == self) continue;
          has_neighbour = true;
          if (!(v > values[other])) {
            is_peak = false;
            break;
          }
        }
      }
      if (is_peak && has_neighbour) peaks.push_back({self, v});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
  });
  return peaks;
}

template <class T>
std::vector<Peak> find_peaks(const PseudoSpectrum<T>& spectrum) {
  if constexpr (std::is_same_v<T, double>) {
    return find_peaks(spectrum.grid, spectrum.values);
  } else {
    const std::vector<double> widened(spectrum.values.begin(), spectrum.values.end());
    return find_peaks(spectrum.grid, widened);
  }
}

DoaEstimate select_doa(std::span<const Peak> peaks, std::size_t model_order,
                       const AngleGrid& grid) {
  if (model_order < 1) throw Error(ErrorKind::invalid_parameter, "model order must be >= 1");
  std::vector<Peak> ranked(peaks.begin(), peaks.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
  });

  DoaEstimate out;
  out.requested = model_order;
  out.az_count = grid.azimuth_count();
  out.el_count = grid.elevation_count();
  const std::size_t keep = std::min(model_order, ranked.size());
  for (std::size_t k = 0; k < keep; ++k) {
    const Peak& p = ranked[k];
    out.peaks.push_back({grid.azimuth_at(p.index), grid.elevation_at(p.index), p.value, p.index});
  }
  out.underdetermined = keep < model_order;
  return out;
}

template <class T>
void write_spectrum_csv(std::ostream& out, const PseudoSpectrum<T>& spectrum) {
  out << "azimuth_deg,elevation_deg,power\n";
  std::ostringstream line;
  line.precision(std::numeric_limits<T>::max_digits10);
  for (std::size_t idx = 0; idx < spectrum.values.size(); ++idx) {
    line.str({});
    line << spectrum.grid.azimuth_at(idx) << ',' << spectrum.grid.elevation_at(idx) << ','
         << spectrum.values[idx] << '\n';
    out << line.str();
  }
}

template <class T>
void write_spectrum_binary(std::ostream& out, const PseudoSpectrum<T>& spectrum) {
  const auto& g = spectrum.grid;
  out << "NSSDOA-SPEC 1 " << g.azimuth_count() << ' ' << g.elevation_count() << ' '
      << to_string(precision_of<T>()) << ' ' << to_string(spectrum.algorithm) << '\n';
  for (double az : g.azimuths()) detail::write_scalar_le(out, az);
  for (double el : g.elevations()) detail::write_scalar_le(out, el);
  for (T v : spectrum.values) detail::write_scalar_le(out, v);
  if (!out) throw Error(ErrorKind::io, "failed writing spectrum");
}

LoadedSpectrum read_spectrum_binary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::io, "spectrum file is empty");
  std::istringstream fields(header);
  std::string magic, precision, alg;
  int version = 0;
  std::size_t n_az = 0, n_el = 0;
  if (!(fields >> magic >> version >> n_az >> n_el >> precision >> alg) ||
      magic != "NSSDOA-SPEC" || version != 1) {
    throw Error(ErrorKind::parse, "malformed spectrum header: '" + header + "'");
  }
  std::vector<double> az(n_az), el(n_el);
  for (auto& x : az) x = detail::read_scalar_le<double>(in);
  for (auto& x : el) x = detail::read_scalar_le<double>(in);

  LoadedSpectrum out{parse_precision(precision),
                     {AngleGrid(std::move(az), std::move(el)), {}, parse_algorithm(alg)}};
  out.spectrum.values.resize(out.spectrum.grid.size());
  for (auto& v : out.spectrum.values) {
    v = out.precision == Precision::single ? detail::read_scalar_le<float>(in)
                                           : detail::read_scalar_le<double>(in);
  }
  return out;
}

template PseudoSpectrum<float> scan(const ManifoldTable<float>&, const NoiseProjector<float>&,
                                    WorkerCount);
template PseudoSpectrum<double> scan(const ManifoldTable<double>&, const NoiseProjector<double>&,
                                     WorkerCount);
template std::vector<Peak> find_peaks(const PseudoSpectrum<float>&);
template std::vector<Peak> find_peaks(const PseudoSpectrum<double>&);
template void write_spectrum_csv(std::ostream&, const PseudoSpectrum<float>&);
template void write_spectrum_csv(std::ostream&, const PseudoSpectrum<double>&);
template void write_spectrum_binary(std::ostream&, const PseudoSpectrum<float>&);
template void write_spectrum_binary(std::ostream&, const PseudoSpectrum<double>&);

}  // namespace doa
