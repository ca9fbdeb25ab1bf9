#pragma once

#include <stdexcept>
#include <string>

namespace doa {

enum class ErrorKind {
  invalid_parameter,
  invalid_scenario,
  dimension_mismatch,
  not_hermitian,
  no_convergence,
  degenerate_spectrum,
  not_psd,
  parse,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

// Numerical failures map to CLI exit code 2, everything else to 1.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace doa
