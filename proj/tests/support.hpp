// Shared helpers and independent oracles for the test binaries.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

#include "doa/array_model.hpp"
#include "doa/linalg.hpp"
#include "doa/signal_sim.hpp"
#include "doa/subspace.hpp"

namespace testing {

using ld = long double;
using cld = std::complex<long double>;
using MatLD = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
using VecLD = Eigen::Matrix<cld, Eigen::Dynamic, 1>;

// The two-source scenario used across suites: 8-element UCA, r = 10 m,
// 15 MHz, sources at 30 and 120 degrees in the array plane, 15 dB, N = 128.
inline doa::ScenarioConfig two_source_scenario(std::uint64_t seed = 42) {
  doa::ScenarioConfig cfg{doa::uniform_circular_array(8, 10.0, 15e6), {{30, 90, 1}, {120, 90, 1}}};
  cfg.snr_db = 15;
  cfg.num_snapshots = 128;
  cfg.seed = seed;
  return cfg;
}

inline doa::AngleGrid azimuth_ring() { return doa::AngleGrid::from_ranges(0, 359, 1, 90, 90, 1); }

template <class T>
doa::ComplexMatrix<T> random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  doa::ComplexMatrix<T> a(rows, cols);
  for (auto& z : a.data()) z = {static_cast<T>(g(rng)), static_cast<T>(g(rng))};
  return a;
}

// B B^H with a random column scaling so the spectrum is spread over a few
// decades and the rank is sometimes deficient.
template <class T>
doa::ComplexMatrix<T> random_psd(std::size_t m, std::mt19937_64& rng) {
  auto b = random_matrix<double>(m, m, rng);
  std::uniform_real_distribution<double> scale(-3.0, 1.0);
  std::uniform_int_distribution<std::size_t> drop(0, m / 2);
  const std::size_t zeroed = (rng() % 4 == 0) ? drop(rng) : 0;
  for (std::size_t c = 0; c < m; ++c) {
    const double s = c < zeroed ? 0.0 : std::pow(10.0, scale(rng));
    for (std::size_t r = 0; r < m; ++r) b(r, c) *= s;
  }
  doa::ComplexMatrix<double> a(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::complex<double> acc{};
      for (std::size_t k = 0; k < m; ++k) acc += b(i, k) * std::conj(b(j, k));
      a(i, j) = acc;
    }
  }
  return doa::cast_matrix<T>(doa::hermitian_part(a));
}

template <class T>
MatLD to_ld(const doa::ComplexMatrix<T>& a) {
  MatLD out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(i, j) = cld(a(i, j).real(), a(i, j).imag());
    }
  }
  return out;
}

template <class T>
VecLD to_ld(std::span<const std::complex<T>> v) {
  VecLD out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = cld(v[i].real(), v[i].imag());
  return out;
}

inline ld frob(const MatLD& a) { return a.norm(); }

// Eigen's self-adjoint solver in long double; eigenvalues ascending.
struct Eigh {
  Eigen::Matrix<ld, Eigen::Dynamic, 1> values;
  MatLD vectors;
};

template <class T>
Eigh oracle_eigh(const doa::ComplexMatrix<T>& a) {
  Eigen::SelfAdjointEigenSolver<MatLD> es(to_ld(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

// Noise projector straight from the algorithm table, in long double.
// Eigenvalues are taken descending, so the noise block is the m - D smallest.
template <class T>
MatLD oracle_projector(const doa::ComplexMatrix<T>& r, std::size_t d, doa::Algorithm alg) {
  const Eigh e = oracle_eigh(r);
  const auto m = static_cast<Eigen::Index>(r.rows());
  const Eigen::Index noise = m - static_cast<Eigen::Index>(d);
  const MatLD en = e.vectors.leftCols(noise);  // ascending, so the smallest first
  switch (alg) {
    case doa::Algorithm::phd: {
      const VecLD v = e.vectors.col(0);
      return v * v.adjoint();
    }
    case doa::Algorithm::music:
      return en * en.adjoint();
    case doa::Algorithm::ev: {
      MatLD w = en;
      for (Eigen::Index k = 0; k < noise; ++k) w.col(k) /= e.values(k);
      return w * w.adjoint();
    }
    case doa::Algorithm::mn: {
      const MatLD pn = en * en.adjoint();
      const VecLD v = pn.col(0) / pn(0, 0).real();
      return v * v.adjoint();
    }
  }
  return {};
}

// Plane-wave phase response written out independently of the library.
inline VecLD steering_oracle(const doa::ArrayGeometry& g, ld az_deg, ld el_deg) {
  const ld pi = std::numbers::pi_v<long double>;
  const ld az = az_deg * pi / 180, el = el_deg * pi / 180;
  const ld k = 2 * pi / static_cast<ld>(g.wavelength());
  VecLD a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& p = g.positions()[i];
    const ld phase = k * (p.x * std::sin(az) * std::sin(el) + p.y * std::cos(az) * std::sin(el) +
                          p.z * std::cos(el));
    a(static_cast<Eigen::Index>(i)) = std::polar<ld>(1, phase);
  }
  return a;
}

// ulp distance between two finite floats of the same sign class.
template <class T>
std::int64_t ulp_distance(T a, T b) {
  using I = std::conditional_t<std::is_same_v<T, float>, std::int32_t, std::int64_t>;
  auto key = [](T x) {
    I i;
    std::memcpy(&i, &x, sizeof(T));
    return i < 0 ? std::numeric_limits<I>::min() - i : i;
  };
  const std::int64_t d = static_cast<std::int64_t>(key(a)) - static_cast<std::int64_t>(key(b));
  return d < 0 ? -d : d;
}

}  // namespace testing
