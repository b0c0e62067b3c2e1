#pragma once

// Finite trigonometric polynomials
//   p(t) = a0/2 + Σ_{k=1}^{m} (a_k cos kt + b_k sin kt).

#include <psiapprox/errors.hpp>
#include <psiapprox/math.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace psiapprox {

class TrigPoly {
 public:
  TrigPoly() = default;

  /// cos_coeffs[k-1] = a_k, sin_coeffs[k-1] = b_k.
  TrigPoly(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) : a0_(a0) {
    const std::size_t m = std::max(cos_coeffs.size(), sin_coeffs.size());
    cos_coeffs.resize(m, 0.0);
    sin_coeffs.resize(m, 0.0);
    a_ = std::move(cos_coeffs);
    b_ = std::move(sin_coeffs);
    trim();
  }

  static TrigPoly constant(double value) { return TrigPoly(2.0 * value, {}, {}); }

  static TrigPoly cosine(int k, double amplitude = 1.0) {
    if (k == 0) return constant(amplitude);
    TrigPoly p;
    p.set_cos(k, amplitude);
    return p;
  }

  static TrigPoly sine(int k, double amplitude = 1.0) {
    TrigPoly p;
    if (k > 0) p.set_sin(k, amplitude);
    return p;
  }

  /// Largest k with (a_k, b_k) != (0, 0), or 0.
  int degree() const { return static_cast<int>(a_.size()); }

  double a0() const { return a0_; }
  double mean() const { return a0_ / 2.0; }
  double a(int k) const { return k == 0 ? a0_ : (k >= 1 && k <= degree() ? a_[k - 1] : 0.0); }
  double b(int k) const { return k >= 1 && k <= degree() ? b_[k - 1] : 0.0; }
  const std::vector<double>& cos_coeffs() const { return a_; }
  const std::vector<double>& sin_coeffs() const { return b_; }
  bool is_zero() const { return a0_ == 0.0 && a_.empty(); }

  void set_a0(double v) { a0_ = v; }

  void set_cos(int k, double v) {
    if (k == 0) {
      a0_ = v;
      return;
    }
    grow(k);
    a_[k - 1] = v;
    trim();
  }

  void set_sin(int k, double v) {
    if (k < 1) return;
    grow(k);
    b_[k - 1] = v;
    trim();
  }

  /// Direct summation with a rotation recurrence, resynchronised every 32 steps.
  double operator()(double t) const {
    double sum = 0.0;
    const double c1 = std::cos(t);
    const double s1 = std::sin(t);
    double ck = 1.0;
    double sk = 0.0;
    const int m = degree();
    for (int k = 1; k <= m; ++k) {
      if ((k & 31) == 0) {
        ck = std::cos(k * t);
        sk = std::sin(k * t);
      } else {
        const double next = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = next;
      }
      sum += a_[k - 1] * ck + b_[k - 1] * sk;
    }
    return a0_ / 2.0 + sum;
  }

  TrigPoly& operator+=(const TrigPoly& o) {
    grow(o.degree());
    a0_ += o.a0_;
    for (int k = 1; k <= o.degree(); ++k) {
      a_[k - 1] += o.a_[k - 1];
      b_[k - 1] += o.b_[k - 1];
    }
    trim();
    return *this;
  }

  TrigPoly& operator-=(const TrigPoly& o) { return *this += o * -1.0; }

  TrigPoly& operator*=(double s) {
    a0_ *= s;
    for (auto& v : a_) v *= s;
    for (auto& v : b_) v *= s;
    trim();
    return *this;
  }

  friend TrigPoly operator+(TrigPoly l, const TrigPoly& r) { return l += r; }
  friend TrigPoly operator-(TrigPoly l, const TrigPoly& r) { return l -= r; }
  friend TrigPoly operator*(TrigPoly p, double s) { return p *= s; }
  friend TrigPoly operator*(double s, TrigPoly p) { return p *= s; }
  friend TrigPoly operator/(TrigPoly p, double s) { return p *= 1.0 / s; }

  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

 private:
  void grow(int m) {
    if (m > degree()) {
      a_.resize(static_cast<std::size_t>(m), 0.0);
      b_.resize(static_cast<std::size_t>(m), 0.0);
    }
  }

  void trim() {
    while (!a_.empty() && a_.back() == 0.0 && b_.back() == 0.0) {
      a_.pop_back();
      b_.pop_back();
    }
  }

  double a0_ = 0.0;
  std::vector<double> a_;
  std::vector<double> b_;
};

inline double eval(const TrigPoly& p, double t) { return p(t); }

/// Keeps the mean and harmonics k <= n-1 (the Fourier sum S_{n-1}).
inline TrigPoly partial_sum(const TrigPoly& p, int n) {
  const int keep = std::clamp(n - 1, 0, p.degree());
  std::vector<double> a(p.cos_coeffs().begin(), p.cos_coeffs().begin() + keep);
  std::vector<double> b(p.sin_coeffs().begin(), p.sin_coeffs().begin() + keep);
  return TrigPoly(p.a0(), std::move(a), std::move(b));
}

/// Harmonics k >= n (p - S_{n-1} p).
inline TrigPoly tail_part(const TrigPoly& p, int n) {
  TrigPoly out;
  for (int k = std::max(n, 1); k <= p.degree(); ++k) {
    out.set_cos(k, p.a(k));
    out.set_sin(k, p.b(k));
  }
  if (n <= 0) out.set_a0(p.a0());
  return out;
}

/// ‖p‖_2 over [0, 2π] by Parseval: sqrt(π (a0²/2 + Σ (a_k² + b_k²))).
inline double l2_norm(const TrigPoly& p) {
  double s = p.a0() * p.a0() / 2.0;
  for (int k = 1; k <= p.degree(); ++k) s += p.a(k) * p.a(k) + p.b(k) * p.b(k);
  return std::sqrt(kPi * s);
}

/// Collects non-fatal diagnostics raised by the analysis routines.
struct Diagnostics {
  std::vector<std::string> warnings;
};

/// Whether an N-point grid is below the 4m+4 oversampling floor for degree m.
inline bool aliasing_risk(int m, int grid_size) { return grid_size < 4 * m + 4; }

/// Degree-m truncation of the discrete Fourier expansion of f sampled at
/// x_j = 2πj/N. Exact (to rounding) for trigonometric polynomials of degree <= N/2 - 1.
inline TrigPoly analyze(const std::function<double(double)>& f, int m, int grid_size,
                        Diagnostics* diag = nullptr) {
  if (m < 0) throw DomainError("analyze: degree must be >= 0");
  if (grid_size < 2) throw DomainError("analyze: grid size must be >= 2");
  if (aliasing_risk(m, grid_size) && diag != nullptr) {
    diag->warnings.push_back("AliasingRisk: grid size " + std::to_string(grid_size) + " < 4m+4 = " +
                             std::to_string(4 * m + 4));
  }
  std::vector<double> samples(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) samples[j] = f(kTwoPi * j / grid_size);

  const int top = std::min(m, (grid_size - 1) / 2);
  std::vector<double> a(static_cast<std::size_t>(top), 0.0);
  std::vector<double> b(static_cast<std::size_t>(top), 0.0);
  double a0 = 0.0;
  for (double v : samples) a0 += v;
  a0 *= 2.0 / grid_size;
  for (int k = 1; k <= top; ++k) {
    double sc = 0.0;
    double ss = 0.0;
    for (int j = 0; j < grid_size; ++j) {
      // k*j reduced mod N keeps the angle exact.
      const double angle = kTwoPi * static_cast<double>((static_cast<long long>(k) * j) % grid_size) / grid_size;
      sc += samples[j] * std::cos(angle);
      ss += samples[j] * std::sin(angle);
    }
    a[k - 1] = 2.0 * sc / grid_size;
    b[k - 1] = 2.0 * ss / grid_size;
  }
  return TrigPoly(a0, std::move(a), std::move(b));
}

}  // namespace psiapprox
