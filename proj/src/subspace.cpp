#include "doa/subspace.hpp"

#include <string>

#include "doa/error.hpp"

namespace doa {

std::string_view to_string(Algorithm alg) noexcept {
  switch (alg) {
    case Algorithm::phd: return "phd";
    case Algorithm::music: return "music";
    case Algorithm::ev: return "ev";
    case Algorithm::mn: return "mn";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : kAllAlgorithms) {
    if (text == to_string(a)) return a;
  }
  throw Error(ErrorKind::invalid_parameter,
              "unknown algorithm '" + std::string(text) + "' (expected phd|music|ev|mn)");
}

namespace {

// sum_t x[t] conj(y[t]) by recursive halving; rounding error grows with
// log2(n) instead of n.
template <class T>
Complex<T> pairwise_dot(const Complex<T>* x, const Complex<T>* y, std::size_t n) {
  if (n <= 8) {
    Complex<T> acc{};
    for (std::size_t t = 0; t < n; ++t) acc += x[t] * std::conj(y[t]);
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_dot(x, y, half) + pairwise_dot(x + half, y + half, n - half);
}

}  // namespace

template <class T>
CovarianceMatrix<T> sample_covariance(const ComplexMatrix<T>& x) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  if (m == 0 || n == 0) throw Error(ErrorKind::dimension_mismatch, "empty snapshot matrix");

  ComplexMatrix<T> r(m, m);
  const T inv_n = T(1) / static_cast<T>(n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto xk = x.row(k);
    for (std::size_t l = 0; l < m; ++l) {
      const auto xl = x.row(l);
      r(k, l) = pairwise_dot(xk.data(), xl.data(), n) * inv_n;
    }
  }
  return {hermitian_part(r), n};
}

namespace {

// sum_k columns[k] columns[k]^H, k ascending.
template <class T>
ComplexMatrix<T> gram(const std::vector<ComplexVector<T>>& columns, std::size_t m) {
  ComplexMatrix<T> c(m, m);
  for (const auto& e : columns) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) c(i, j) += e[i] * std::conj(e[j]);
    }
  }
  return hermitian_part(c);
}

}  // namespace

template <class T>
NoiseProjector<T> projector_from_decomposition(const SvdResult<T>& svd, std::size_t model_order,
                                               Algorithm alg) {
  const std::size_t m = svd.s.size();
  if (model_order < 1 || model_order >= m) {
    throw Error(ErrorKind::invalid_parameter, "model order D=" + std::to_string(model_order) +
                                                  " must satisfy 1 <= D < m=" + std::to_string(m));
  }
  const T tol = rank_tolerance<T>();

  std::vector<ComplexVector<T>> noise;
  for (std::size_t k = model_order; k < m; ++k) noise.push_back(svd.u.col(k));

  NoiseProjector<T> out{ComplexMatrix<T>(), alg, model_order};
  switch (alg) {
    case Algorithm::phd:
      out.c = gram<T>({svd.u.col(m - 1)}, m);
      break;
    case Algorithm::music:
      out.c = gram(noise, m);
      break;
    case Algorithm::ev: {
      const T floor = tol * svd.s.front();
      for (std::size_t k = 0; k < noise.size(); ++k) {
        const T sv = svd.s[model_order + k];
        if (!(sv > floor)) {
          throw Error(ErrorKind::degenerate_spectrum,
                      "ev: noise singular value " + std::to_string(sv) + " is numerically zero");
        }
        for (auto& z : noise[k]) z *= T(1) / sv;
      }
      out.c = gram(noise, m);
      break;
    }
    case Algorithm::mn: {
      const ComplexMatrix<T> pn = gram(noise, m);
      const T denom = pn(0, 0).real();
      if (!(denom > tol)) {
        throw Error(ErrorKind::degenerate_spectrum,
                    "mn: e1^H Pn e1 = " + std::to_string(denom) + " is numerically zero");
      }
      const T lambda = T(1) / denom;
      ComplexVector<T> valph(m);
      for (std::size_t i = 0; i < m; ++i) valph[i] = pn(i, 0) * lambda;
      out.c = gram<T>({valph}, m);
      break;
    }
  }
  return out;
}

template <class T>
NoiseProjector<T> noise_projector(const CovarianceMatrix<T>& cov, std::size_t model_order,
                                  Algorithm alg) {
  return projector_from_decomposition(hermitian_svd(cov.r), model_order, alg);
}

template CovarianceMatrix<float> sample_covariance(const ComplexMatrix<float>&);
template CovarianceMatrix<double> sample_covariance(const ComplexMatrix<double>&);
template NoiseProjector<float> projector_from_decomposition(const SvdResult<float>&, std::size_t,
                                                            Algorithm);
template NoiseProjector<double> projector_from_decomposition(const SvdResult<double>&,
                                                             std::size_t, Algorithm);
template NoiseProjector<float> noise_projector(const CovarianceMatrix<float>&, std::size_t,
                                               Algorithm);
template NoiseProjector<double> noise_projector(const CovarianceMatrix<double>&, std::size_t,
                                                Algorithm);

}  // namespace doa
