#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "doa/linalg.hpp"

namespace doa {

enum class Algorithm { phd, music, ev, mn };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms{Algorithm::phd, Algorithm::music,
                                                         Algorithm::ev, Algorithm::mn};

// "phd", "music", "ev", "mn"
std::string_view to_string(Algorithm alg) noexcept;
Algorithm parse_algorithm(std::string_view text);

template <class T>
struct CovarianceMatrix {
  ComplexMatrix<T> r;
  std::size_t num_snapshots = 0;
};

// R = X X^H / N, symmetrized after accumulation.
template <class T>
CovarianceMatrix<T> sample_covariance(const ComplexMatrix<T>& x);

template <class T>
struct NoiseProjector {
  ComplexMatrix<T> c;
  Algorithm algorithm = Algorithm::music;
  std::size_t model_order = 0;
};

/// Builds the algorithm-specific noise projector C from a decomposition of
/// the covariance (singular values descending).
///
///  - phd:   C = e e^H, e the last column of U (smallest singular value;
///           ties resolve to the highest index).
///  - music: C = En En^H, En = columns D..m-1 of U.
///  - ev:    C = sum over noise columns of e_k e_k^H / s_k^2.
///  - mn:    Pn = En En^H, w = Pn e1 / (e1^H Pn e1), C = w w^H.
///
/// Throws degenerate-spectrum when ev meets a noise singular value at or
/// below tol * s_max, or when mn's e1^H Pn e1 is at or below tol.
template <class T>
NoiseProjector<T> projector_from_decomposition(const SvdResult<T>& svd, std::size_t model_order,
                                               Algorithm alg);

template <class T>
NoiseProjector<T> noise_projector(const CovarianceMatrix<T>& cov, std::size_t model_order,
                                  Algorithm alg);

}  // namespace doa
