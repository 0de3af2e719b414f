#include "cubictwist/sha.hpp"

#include <cmath>
#include <string>

#include "cubictwist/errors.hpp"

namespace cubictwist {

CertifiedValue sha_analytic(const CertifiedValue& l_value, const TwistCurve& curve) {
  const double scale = static_cast<double>(curve.torsion_factor) /
                       (static_cast<double>(curve.tamagawa_product) * curve.period);
  // The period carries ~1e-16 relative error; 1e-15 covers it and the products.
  const double value = l_value.value * scale;
  return {value, l_value.error_bound * scale + std::fabs(value) * 1e-15};
}

ShaOutcome certify(const CertifiedValue& sha) {
  ShaOutcome out;
  out.raw = sha;
  if (sha.upper() < kVanishingThreshold) {
    out.kind = ShaKind::vanishing;
    return out;
  }
  const double nearest = std::round(sha.value);
  const double margin = kRoundingMargin * std::max(1.0, nearest);
  if (nearest < 1.0 || std::fabs(sha.value - nearest) + sha.error_bound >= margin) {
    throw Error(ErrorKind::NotNearInteger, "value " + std::to_string(sha.value) + " +- " +
                                               std::to_string(sha.error_bound));
  }
  const auto n = static_cast<std::uint64_t>(nearest);
  const std::uint64_t root = isqrt(n);
  if (root * root != n) {
    throw Error(ErrorKind::NotASquare, std::to_string(n) + " is not a square");
  }
  out.kind = ShaKind::order;
  out.order = n;
  out.root = root;
  return out;
}

}  // namespace cubictwist
