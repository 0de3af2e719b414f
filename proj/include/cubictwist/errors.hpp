#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cubictwist {

enum class ErrorKind {
  Overflow,
  NotSplitPrime,
  NotPrimary,
  NotCubeFree,
  NotBadPrime,
  BadPrime,
  CutoffTooSmall,
  AmbiguousSign,
  OddSign,
  NotNearInteger,
  NotASquare,
  ManifestCorrupt,
  RangeNotCovered,
  EmptySubset,
  DomainError,
  InsufficientData,
  NotSquareFree,
  RoundingMarginFailed,
  DivisionByZero,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure carries a kind so the CLI can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cubictwist
