#include "doa/error.hpp"

namespace doa {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_scenario: return "invalid-scenario";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::not_hermitian: return "not-hermitian";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::degenerate_spectrum: return "degenerate-spectrum";
    case ErrorKind::not_psd: return "not-psd";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::not_hermitian:
    case ErrorKind::no_convergence:
    case ErrorKind::degenerate_spectrum:
    case ErrorKind::not_psd:
      return true;
    default:
      return false;
  }
}

}  // namespace doa
