#pragma once

#include <cstdint>

#include "cubictwist/curve.hpp"
#include "cubictwist/lseries.hpp"

namespace cubictwist {

enum class ShaKind { order, vanishing };

struct ShaOutcome {
  ShaKind kind = ShaKind::vanishing;
  std::uint64_t order = 0;  // root * root when kind == order
  std::uint64_t root = 0;
  CertifiedValue raw;
};

// Values certified below this are classified as L(E_m,1) = 0.
inline constexpr double kVanishingThreshold = 0.5;
// Relative rounding margin required around the nearest integer.
inline constexpr double kRoundingMargin = 0.01;

// |Sha| = L * T_m / (C_fin * C_inf), error propagated linearly.
CertifiedValue sha_analytic(const CertifiedValue& l_value, const TwistCurve& curve);

// Throws NotNearInteger when the interval does not pin an integer, and
// NotASquare when it pins a non-square.
ShaOutcome certify(const CertifiedValue& sha);

}  // namespace cubictwist
