#pragma once

#include <cstddef>

#include "doa/array_model.hpp"
#include "doa/spectrum.hpp"
#include "doa/subspace.hpp"

namespace doa {

template <class T>
struct PipelineResult {
  CovarianceMatrix<T> covariance;
  NoiseProjector<T> projector;
  PseudoSpectrum<T> spectrum;
  DoaEstimate estimate;
};

// Covariance, decomposition, projector, scan, peak search and selection on a
// prebuilt manifold. Each stage is timed into estimate.timings; only the
// scan runs on more than one worker.
template <class T>
PipelineResult<T> run_pipeline(const ComplexMatrix<T>& snapshots, const ManifoldTable<T>& manifold,
                               std::size_t model_order, Algorithm alg,
                               WorkerCount workers = WorkerCount::fixed(1));

}  // namespace doa
