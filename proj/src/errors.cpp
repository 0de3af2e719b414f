#include "cubictwist/errors.hpp"

namespace cubictwist {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotSplitPrime: return "NotSplitPrime";
    case ErrorKind::NotPrimary: return "NotPrimary";
    case ErrorKind::NotCubeFree: return "NotCubeFree";
    case ErrorKind::NotBadPrime: return "NotBadPrime";
    case ErrorKind::BadPrime: return "BadPrime";
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::AmbiguousSign: return "AmbiguousSign";
    case ErrorKind::OddSign: return "OddSign";
    case ErrorKind::NotNearInteger: return "NotNearInteger";
    case ErrorKind::NotASquare: return "NotASquare";
    case ErrorKind::ManifestCorrupt: return "ManifestCorrupt";
    case ErrorKind::RangeNotCovered: return "RangeNotCovered";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NotSquareFree: return "NotSquareFree";
    case ErrorKind::RoundingMarginFailed: return "RoundingMarginFailed";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cubictwist
