#include "doa/pipeline.hpp"

#include <chrono>
#include <string>

#include "doa/error.hpp"

namespace doa {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

template <class T>
PipelineResult<T> run_pipeline(const ComplexMatrix<T>& snapshots, const ManifoldTable<T>& manifold,
                               std::size_t model_order, Algorithm alg, WorkerCount workers) {
  if (snapshots.rows() != manifold.elements()) {
    throw Error(ErrorKind::dimension_mismatch,
                "snapshots have " + std::to_string(snapshots.rows()) +
                    " elements but the array geometry has " +
                    std::to_string(manifold.elements()));
  }
  StepTimings t;

  auto start = Clock::now();
  CovarianceMatrix<T> cov = sample_covariance(snapshots);
  t.covariance_ms = elapsed_ms(start);

  start = Clock::now();
  const SvdResult<T> svd = hermitian_svd(cov.r);
  t.decomposition_ms = elapsed_ms(start);

  start = Clock::now();
  NoiseProjector<T> projector = projector_from_decomposition(svd, model_order, alg);
  t.projector_ms = elapsed_ms(start);

  start = Clock::now();
  PseudoSpectrum<T> spectrum = scan(manifold, projector, workers);
  t.scan_ms = elapsed_ms(start);

  start = Clock::now();
  const auto peaks = find_peaks(spectrum);
  DoaEstimate estimate = select_doa(peaks, model_order, manifold.grid());
  t.peaks_ms = elapsed_ms(start);

  estimate.algorithm = alg;
  estimate.timings = t;
  return {std::move(cov), std::move(projector), std::move(spectrum), std::move(estimate)};
}

template PipelineResult<float> run_pipeline(const ComplexMatrix<float>&,
                                            const ManifoldTable<float>&, std::size_t, Algorithm,
                                            WorkerCount);
template PipelineResult<double> run_pipeline(const ComplexMatrix<double>&,
                                             const ManifoldTable<double>&, std::size_t, Algorithm,
                                             WorkerCount);

}  // namespace doa
