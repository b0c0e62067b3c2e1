#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace psiapprox {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// cos(βπ/2) and sin(βπ/2), exact when 2β is an integer.
struct Phase {
  double cos = 1.0;
  double sin = 0.0;
};

inline Phase phase(double beta) {
  double reduced = std::fmod(beta, 4.0);
  if (reduced < 0.0) reduced += 4.0;
  const double twice = 2.0 * reduced;
  if (twice == std::floor(twice)) {
    static constexpr double kHalf = std::numbers::sqrt2 / 2.0;
    static constexpr Phase kTable[8] = {{1, 0},       {kHalf, kHalf},   {0, 1},  {-kHalf, kHalf},
                                        {-1, 0},      {-kHalf, -kHalf}, {0, -1}, {kHalf, -kHalf}};
    return kTable[static_cast<int>(twice)];
  }
  const double angle = reduced * kPi / 2.0;
  return {std::cos(angle), std::sin(angle)};
}

/// Hölder conjugate: 1/p + 1/p' = 1, with 1 <-> ∞.
inline double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// Representative of t modulo 2π in (-π, π].
inline double reduce_angle(double t) {
  double r = std::remainder(t, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Distance from t to the nearest multiple of 2π.
inline double distance_to_lattice(double t) { return std::abs(reduce_angle(t)); }

}  // namespace psiapprox
