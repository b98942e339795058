#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rkhs {

enum class ErrorKind {
  bounds,
  shape,
  domain,
  degree,
  conditioning,
  unsupported_space,
  singularity,
  precondition,
  degenerate_query,
  divergence_risk,
  parse,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a Gram-Schmidt residual falls below the degeneracy threshold.
/// `index()` is the zero-based position of the offending tuple entry.
class ConditioningError : public Error {
 public:
  ConditioningError(std::size_t index, const std::string& what)
      : Error(ErrorKind::conditioning, what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace rkhs
