#pragma once

// Reference computations for the tests, written independently of the
// library: plain loops in long double, no acceleration, no shared helpers.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// cos(βπ/2)/2 + Σ_{j=1}^{k} cos(jt - βπ/2), one cosine per term.
inline double dirichlet_beta(int k, double beta, double t) {
  const long double shift = beta * kPi / 2.0L;
  long double s = 0.5L * std::cos(shift);
  for (int j = 1; j <= k; ++j) s += std::cos(j * static_cast<long double>(t) - shift);
  return static_cast<double>(s);
}

inline double fejer(int k, double t) {
  long double s = 0.0L;
  for (int nu = 0; nu <= k; ++nu) s += dirichlet_beta(nu, 0.0, t);
  return static_cast<double>(s / (k + 1));
}

/// Σ_{k=lo}^{hi} ψ(k) cos(kt - βπ/2).
inline double partial_tail(const std::function<long double(long double)>& psi, double beta, long long lo, long long hi,
                           double t) {
  const long double shift = beta * kPi / 2.0L;
  long double s = 0.0L;
  for (long long k = lo; k <= hi; ++k) s += psi(k) * std::cos(k * static_cast<long double>(t) - shift);
  return static_cast<double>(s);
}

/// Σ_{k>=n} k^{-s}, s > 1: direct sum to M and a two-term Euler–Maclaurin tail.
inline double power_tail_sum(double s, long long n, long long M = 2'000'000) {
  long double sum = 0.0L;
  for (long long k = M; k >= n; --k) sum += std::pow(static_cast<long double>(k), -static_cast<long double>(s));
  const long double m = static_cast<long double>(M + 1);
  const long double tail = std::pow(m, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(m, -static_cast<long double>(s)) +
                           s / 12.0L * std::pow(m, -static_cast<long double>(s) - 1.0L);
  return static_cast<double>(sum + tail);
}

/// (∫_0^{2π} |f|^p)^{1/p} by the midpoint rule on `points` nodes.
inline double midpoint_norm(const std::function<double(double)>& f, double p, long long points) {
  const long double h = 2.0L * kPi / points;
  long double s = 0.0L;
  for (long long j = 0; j < points; ++j) s += std::pow(std::abs(static_cast<long double>(f((j + 0.5L) * h))), p);
  return static_cast<double>(std::pow(s * h, 1.0L / p));
}

/// max |f| over a uniform grid.
inline double grid_max(const std::function<double(double)>& f, long long points) {
  double best = 0.0;
  for (long long j = 0; j < points; ++j) best = std::max(best, std::abs(f(2.0 * static_cast<double>(kPi) * j / points)));
  return best;
}

/// Fourier coefficients a_k, b_k of f by a long-double rectangle rule (exact for low degree).
inline std::pair<double, double> coefficient(const std::function<double(double)>& f, int k, int points = 4096) {
  long double a = 0.0L;
  long double b = 0.0L;
  for (int j = 0; j < points; ++j) {
    const long double x = 2.0L * kPi * j / points;
    const long double v = f(static_cast<double>(x));
    a += v * std::cos(k * x);
    b += v * std::sin(k * x);
  }
  return {static_cast<double>(2.0L * a / points), static_cast<double>(2.0L * b / points)};
}

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, int size) {
  std::normal_distribution<double> dist;
  std::vector<double> v(static_cast<std::size_t>(size));
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace oracle
