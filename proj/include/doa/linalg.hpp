#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace doa {

enum class Precision { single, double_ };

std::string_view to_string(Precision p) noexcept;
Precision parse_precision(std::string_view text);

template <class T>
constexpr Precision precision_of() noexcept {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? Precision::single : Precision::double_;
}

// Rank and degeneracy tolerance used throughout: 100 machine epsilons.
template <class T>
constexpr T rank_tolerance() noexcept {
  return T(100) * std::numeric_limits<T>::epsilon();
}

template <class T>
using Complex = std::complex<T>;

template <class T>
using ComplexVector = std::vector<Complex<T>>;

// Dense row-major complex matrix.
template <class T>
class ComplexMatrix {
 public:
  using value_type = Complex<T>;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<value_type> data);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  value_type& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<value_type> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const value_type> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  ComplexVector<T> col(std::size_t c) const;

  std::span<value_type> data() noexcept { return data_; }
  std::span<const value_type> data() const noexcept { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

template <class T>
ComplexMatrix<T> matmul(const ComplexMatrix<T>& a, const ComplexMatrix<T>& b);

template <class T>
ComplexMatrix<T> adjoint(const ComplexMatrix<T>& a);

template <class T>
ComplexMatrix<T> operator-(const ComplexMatrix<T>& a, const ComplexMatrix<T>& b);

// a * b^H
template <class T>
ComplexMatrix<T> outer_product(std::span<const Complex<T>> a, std::span<const Complex<T>> b);

template <class T>
ComplexVector<T> matvec(const ComplexMatrix<T>& a, std::span<const Complex<T>> x);

// a^H * C * a. The accumulation order is fixed: row k of C is contracted
// with a first, then weighted by conj(a_k), k ascending.
template <class T>
Complex<T> quadratic_form(std::span<const Complex<T>> a, const ComplexMatrix<T>& c);

// Real part of quadratic_form after checking the imaginary residue is within
// |Im| <= 1e-6 |Re| + slack. Throws not-hermitian otherwise.
template <class T>
T hermitian_form(std::span<const Complex<T>> a, const ComplexMatrix<T>& c, T slack);

template <class T>
T frobenius_norm(const ComplexMatrix<T>& a);

template <class T>
T vector_norm(std::span<const Complex<T>> a);

// (A + A^H) / 2
template <class T>
ComplexMatrix<T> hermitian_part(const ComplexMatrix<T>& a);

template <class T>
ComplexMatrix<T> cast_matrix(const ComplexMatrix<double>& a);

template <class T>
struct SvdResult {
  ComplexMatrix<T> u;  // left singular vectors in columns
  std::vector<T> s;    // non-increasing, non-negative
  ComplexMatrix<T> v;  // right singular vectors in columns
  int sweeps = 0;
};

inline constexpr int kMaxJacobiSweeps = 30;

/// Singular value decomposition of a square Hermitian matrix by cyclic
/// two-sided Jacobi rotations (row-cyclic pivot order).
///
/// The input is accepted if ||A - A^H||_F <= 10 eps ||A||_F and is
/// symmetrized before iterating. Iteration stops once the off-diagonal
/// Frobenius norm drops to 10 eps ||A||_F; exceeding kMaxJacobiSweeps raises
/// no-convergence. Singular values are the absolute eigenvalues sorted
/// descending (stable, so ties keep eigenvector order). Each column of U is
/// rotated so that its largest-magnitude component is real and positive; V
/// equals U up to the sign of the matching eigenvalue, so V == U for PSD
/// input. Eigenvalues within 10 eps ||A||_F of zero count as non-negative. Non-finite entries are rejected as invalid-parameter.
template <class T>
SvdResult<T> hermitian_svd(const ComplexMatrix<T>& a, int max_sweeps = kMaxJacobiSweeps);

// ||A - U diag(S) V^H||_F
template <class T>
T svd_residual(const ComplexMatrix<T>& a, const SvdResult<T>& r);

}  // namespace doa
