#include "doa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "doa/error.hpp"

namespace doa {

std::string_view to_string(Precision p) noexcept {
  return p == Precision::single ? "single" : "double";
}

Precision parse_precision(std::string_view text) {
  if (text == "single") return Precision::single;
  if (text == "double") return Precision::double_;
  throw Error(ErrorKind::invalid_parameter,
              "unknown precision '" + std::string(text) + "' (expected single|double)");
}

template <class T>
ComplexMatrix<T>::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<value_type> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::dimension_mismatch, "matrix data length does not match rows*cols");
  }
}

template <class T>
ComplexMatrix<T> ComplexMatrix<T>::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
  return m;
}

template <class T>
ComplexVector<T> ComplexMatrix<T>::col(std::size_t c) const {
  ComplexVector<T> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::dimension_mismatch, what);
}

}  // namespace

template <class T>
ComplexMatrix<T> matmul(const ComplexMatrix<T>& a, const ComplexMatrix<T>& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  ComplexMatrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex<T> aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <class T>
ComplexMatrix<T> adjoint(const ComplexMatrix<T>& a) {
  ComplexMatrix<T> out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

template <class T>
ComplexMatrix<T> operator-(const ComplexMatrix<T>& a, const ComplexMatrix<T>& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "subtract: shapes differ");
  ComplexMatrix<T> out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
  return out;
}

template <class T>
ComplexMatrix<T> outer_product(std::span<const Complex<T>> a, std::span<const Complex<T>> b) {
  ComplexMatrix<T> out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  }
  return out;
}

template <class T>
ComplexVector<T> matvec(const ComplexMatrix<T>& a, std::span<const Complex<T>> x) {
  require(a.cols() == x.size(), "matvec: length mismatch");
  ComplexVector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex<T> acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

template <class T>
Complex<T> quadratic_form(std::span<const Complex<T>> a, const ComplexMatrix<T>& c) {
  require(c.rows() == a.size() && c.cols() == a.size(), "quadratic_form: shape mismatch");
  const std::size_t m = a.size();
  Complex<T> total{};
  for (std::size_t k = 0; k < m; ++k) {
    const auto row = c.row(k);
    Complex<T> acc{};
    for (std::size_t l = 0; l < m; ++l) acc += row[l] * a[l];
    total += std::conj(a[k]) * acc;
  }
  return total;
}

template <class T>
T hermitian_form(std::span<const Complex<T>> a, const ComplexMatrix<T>& c, T slack) {
  const Complex<T> q = quadratic_form(a, c);
  if (std::abs(q.imag()) > T(1e-6) * std::abs(q.real()) + slack) {
    throw Error(ErrorKind::not_hermitian,
                "quadratic form has imaginary residue " + std::to_string(q.imag()));
  }
  return q.real();
}

template <class T>
T frobenius_norm(const ComplexMatrix<T>& a) {
  T sum = 0;
  for (const auto& z : a.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

template <class T>
T vector_norm(std::span<const Complex<T>> a) {
  T sum = 0;
  for (const auto& z : a) sum += std::norm(z);
  return std::sqrt(sum);
}

template <class T>
ComplexMatrix<T> hermitian_part(const ComplexMatrix<T>& a) {
  require(a.square(), "hermitian_part: matrix not square");
  ComplexMatrix<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out(i, i) = Complex<T>(a(i, i).real(), T(0));
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const Complex<T> z = (a(i, j) + std::conj(a(j, i))) * T(0.5);
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
  }
  return out;
}

template <class T>
ComplexMatrix<T> cast_matrix(const ComplexMatrix<double>& a) {
  std::vector<Complex<T>> data(a.data().size());
  std::transform(a.data().begin(), a.data().end(), data.begin(), [](const Complex<double>& z) {
    return Complex<T>(static_cast<T>(z.real()), static_cast<T>(z.imag()));
  });
  return {a.rows(), a.cols(), std::move(data)};
}

namespace {

template <class T>
T off_diagonal_norm(const ComplexMatrix<T>& a) {
  T sum = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// One complex Jacobi rotation annihilating a(p, q), p < q. J = diag-phase
// followed by the classic real rotation, so J^H A J is diagonal on {p, q}.
template <class T>
void rotate(ComplexMatrix<T>& a, ComplexMatrix<T>& vecs, std::size_t p, std::size_t q) {
  const Complex<T> apq = a(p, q);
  const T r = std::abs(apq);
  // A subnormal pivot has too few bits for apq / r to be a unit phase.
  if (r < std::numeric_limits<T>::min()) {
    a(p, q) = T(0);
    a(q, p) = T(0);
    return;
  }

  const T app = a(p, p).real();
  const T aqq = a(q, q).real();
  const T tau = (aqq - app) / (T(2) * r);
  const T t = (tau >= T(0) ? T(1) : T(-1)) / (std::abs(tau) + std::hypot(T(1), tau));
  const T c = T(1) / std::sqrt(T(1) + t * t);
  const T s = t * c;
  const Complex<T> phase = std::conj(apq / r);

  const Complex<T> jpp = c;
  const Complex<T> jpq = s;
  const Complex<T> jqp = -s * phase;
  const Complex<T> jqq = c * phase;

  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex<T> xp = a(i, p);
    const Complex<T> xq = a(i, q);
    a(i, p) = xp * jpp + xq * jqp;
    a(i, q) = xp * jpq + xq * jqq;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Complex<T> xp = a(p, j);
    const Complex<T> xq = a(q, j);
    a(p, j) = std::conj(jpp) * xp + std::conj(jqp) * xq;
    a(q, j) = std::conj(jpq) * xp + std::conj(jqq) * xq;
  }
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;
  a(p, q) = T(0);
  a(q, p) = T(0);

  for (std::size_t i = 0; i < n; ++i) {
    const Complex<T> xp = vecs(i, p);
    const Complex<T> xq = vecs(i, q);
    vecs(i, p) = xp * jpp + xq * jqp;
    vecs(i, q) = xp * jpq + xq * jqq;
  }
}

}  // namespace

template <class T>
SvdResult<T> hermitian_svd(const ComplexMatrix<T>& input, int max_sweeps) {
  if (!input.square()) {
    throw Error(ErrorKind::dimension_mismatch, "hermitian_svd: matrix not square");
  }
  for (const auto& z : input.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::invalid_parameter, "hermitian_svd: non-finite entry");
    }
  }
  const std::size_t n = input.rows();
  const T eps = std::numeric_limits<T>::epsilon();
  const T scale = frobenius_norm(input);

  const T asym = frobenius_norm(input - adjoint(input));
  if (asym > T(10) * eps * scale) {
    throw Error(ErrorKind::not_hermitian, "hermitian_svd: ||A - A^H||_F = " +
                                              std::to_string(asym) + " exceeds 10 eps ||A||_F");
  }

  ComplexMatrix<T> a = hermitian_part(input);
  ComplexMatrix<T> vecs = ComplexMatrix<T>::identity(n);
  const T threshold = T(10) * eps * scale;

  // Once the off-diagonal norm meets the threshold, one more sweep is made:
  // the threshold is absolute, and the smallest eigenpairs only settle after
  // the quadratic step that follows it.
  int sweeps = 0;
  bool polish = false;
  for (;;) {
    const T off = off_diagonal_norm(a);
    if (off <= threshold) {
      if (polish || off == T(0) || sweeps == max_sweeps) break;
      polish = true;
    } else if (sweeps == max_sweeps) {
      throw Error(ErrorKind::no_convergence,
                  "hermitian_svd: not converged after " + std::to_string(max_sweeps) +
                      " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, vecs, p, q);
    }
    ++sweeps;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(a(i, i).real()) > std::abs(a(j, j).real());
  });

  SvdResult<T> out{ComplexMatrix<T>(n, n), std::vector<T>(n), ComplexMatrix<T>(n, n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    const T lambda = a(src, src).real();
    out.s[k] = std::abs(lambda);

    std::size_t pivot = 0;
    T best = T(-1);
    for (std::size_t i = 0; i < n; ++i) {
      const T mag = std::abs(vecs(i, src));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    const Complex<T> phase = best > T(0) ? std::conj(vecs(pivot, src)) / best : Complex<T>(1);
    // Eigenvalues within the convergence threshold of zero carry no sign.
    const T sign = lambda < -threshold ? T(-1) : T(1);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex<T> z = i == pivot ? Complex<T>(best, T(0)) : vecs(i, src) * phase;
      out.u(i, k) = z;
      out.v(i, k) = sign * z;
    }
  }
  return out;
}

template <class T>
T svd_residual(const ComplexMatrix<T>& a, const SvdResult<T>& r) {
  const std::size_t k = r.s.size();
  if (r.u.rows() != a.rows() || r.v.rows() != a.cols() || r.u.cols() != k || r.v.cols() != k) {
    throw Error(ErrorKind::dimension_mismatch, "svd_residual: factor shapes do not match A");
  }
  T sum = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Complex<T> acc{};
      for (std::size_t l = 0; l < k; ++l) acc += r.u(i, l) * r.s[l] * std::conj(r.v(j, l));
      sum += std::norm(a(i, j) - acc);
    }
  }
  return std::sqrt(sum);
}

#define DOA_INSTANTIATE_LINALG(T)                                                               \
  template class ComplexMatrix<T>;                                                              \
  template ComplexMatrix<T> matmul(const ComplexMatrix<T>&, const ComplexMatrix<T>&);           \
  template ComplexMatrix<T> adjoint(const ComplexMatrix<T>&);                                   \
  template ComplexMatrix<T> operator-(const ComplexMatrix<T>&, const ComplexMatrix<T>&);        \
  template ComplexMatrix<T> outer_product(std::span<const Complex<T>>,                          \
                                          std::span<const Complex<T>>);                         \
  template ComplexVector<T> matvec(const ComplexMatrix<T>&, std::span<const Complex<T>>);       \
  template Complex<T> quadratic_form(std::span<const Complex<T>>, const ComplexMatrix<T>&);     \
  template T hermitian_form(std::span<const Complex<T>>, const ComplexMatrix<T>&, T);           \
  template T frobenius_norm(const ComplexMatrix<T>&);                                           \
  template T vector_norm(std::span<const Complex<T>>);                                          \
  template ComplexMatrix<T> hermitian_part(const ComplexMatrix<T>&);                            \
  template ComplexMatrix<T> cast_matrix<T>(const ComplexMatrix<double>&);                       \
  template SvdResult<T> hermitian_svd(const ComplexMatrix<T>&, int);                             \
  template T svd_residual(const ComplexMatrix<T>&, const SvdResult<T>&);

DOA_INSTANTIATE_LINALG(float)
DOA_INSTANTIATE_LINALG(double)

#undef DOA_INSTANTIATE_LINALG

}  // namespace doa
