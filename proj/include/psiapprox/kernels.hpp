#pragma once

// Dirichlet, conjugate-phase Dirichlet, Fejér and Vallée Poussin kernels,
// and the tail kernel Ψ_{β,n}(t) = Σ_{k>=n} ψ(k) cos(kt - βπ/2).

#include <psiapprox/errors.hpp>
#include <psiapprox/lp_norms.hpp>
#include <psiapprox/math.hpp>
#include <psiapprox/psi.hpp>
#include <psiapprox/trig_poly.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace psiapprox {

namespace detail {

inline constexpr double kSmallSine = 1e-6;

/// cos(βπ/2)/2 + Σ_{j=1}^{k} cos(jt - βπ/2), summed directly.
inline double dirichlet_beta_sum(int k, const Phase& ph, double t) {
  double s = 0.5 * ph.cos;
  for (int j = 1; j <= k; ++j) {
    const double a = j * t;
    s += std::cos(a) * ph.cos + std::sin(a) * ph.sin;
  }
  return s;
}

}  // namespace detail

/// D_{k,β}(t) = cos(βπ/2)/2 + Σ_{j=1}^{k} cos(jt - βπ/2).
inline double dirichlet_beta(int k, double beta, double t) {
  if (k < 0) throw DomainError("dirichlet_beta: k must be >= 0");
  const Phase ph = phase(beta);
  const double r = reduce_angle(t);
  const double s = std::sin(r / 2.0);
  if (std::abs(s) < detail::kSmallSine) return detail::dirichlet_beta_sum(k, ph, r);
  const double w = (2.0 * k + 1.0) * r / 2.0;
  double value = 0.0;
  if (ph.cos != 0.0) value += ph.cos * std::sin(w) / (2.0 * s);
  if (ph.sin != 0.0) value += ph.sin * (std::cos(r / 2.0) - std::cos(w)) / (2.0 * s);
  return value;
}

inline double dirichlet(int k, double t) { return dirichlet_beta(k, 0.0, t); }

/// F_k(t) = (1/(k+1)) Σ_{ν=0}^{k} D_ν(t).
inline double fejer(int k, double t) {
  if (k < 0) throw DomainError("fejer: k must be >= 0");
  const double r = reduce_angle(t);
  const double s = std::sin(r / 2.0);
  if (std::abs(s) < detail::kSmallSine) {
    double v = 0.5;
    for (int j = 1; j <= k; ++j) v += (1.0 - j / (k + 1.0)) * std::cos(j * r);
    return v;
  }
  const double q = std::sin((k + 1.0) * r / 2.0) / s;
  return q * q / (2.0 * (k + 1.0));
}

enum class VpRoute {
  Average,     ///< (1/m) Σ_{k=m}^{2m-1} D_k
  Fejer,       ///< 2F_{2m-1} - F_{m-1}
  Expansion,   ///< D_m + 2 Σ_{k=m+1}^{2m-1} (1 - k/(2m)) cos kt
};

inline double vallee_poussin(int m, double t, VpRoute route = VpRoute::Average) {
  if (m < 1) throw DomainError("vallee_poussin: m must be >= 1");
  switch (route) {
    case VpRoute::Fejer:
      return 2.0 * fejer(2 * m - 1, t) - fejer(m - 1, t);
    case VpRoute::Expansion: {
      double v = dirichlet(m, t);
      for (int k = m + 1; k <= 2 * m - 1; ++k) v += 2.0 * (1.0 - k / (2.0 * m)) * std::cos(k * t);
      return v;
    }
    case VpRoute::Average:
      break;
  }
  double v = 0.0;
  for (int k = m; k <= 2 * m - 1; ++k) v += dirichlet(k, t);
  return v / m;
}

inline TrigPoly dirichlet_poly(int k) {
  if (k < 0) throw DomainError("dirichlet_poly: k must be >= 0");
  return TrigPoly(1.0, std::vector<double>(static_cast<std::size_t>(k), 1.0), {});
}

inline TrigPoly fejer_poly(int k) {
  if (k < 0) throw DomainError("fejer_poly: k must be >= 0");
  std::vector<double> a(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) a[j - 1] = 1.0 - j / (k + 1.0);
  return TrigPoly(1.0, std::move(a), {});
}

inline TrigPoly vallee_poussin_poly(int m) {
  if (m < 1) throw DomainError("vallee_poussin_poly: m must be >= 1");
  std::vector<double> a(static_cast<std::size_t>(2 * m - 1), 1.0);
  for (int k = m + 1; k <= 2 * m - 1; ++k) a[k - 1] = 2.0 * (1.0 - k / (2.0 * m));
  return TrigPoly(1.0, std::move(a), {});
}

/// V_{2n} - V_n as an explicit cosine polynomial of degree 4n - 1.
inline TrigPoly vp_difference(int n) {
  if (n < 1) throw DomainError("vp_difference: n must be >= 1");
  std::vector<double> a(static_cast<std::size_t>(4 * n - 1), 0.0);
  for (int k = n + 1; k <= 2 * n; ++k) a[k - 1] = -(1.0 - static_cast<double>(k) / n);
  for (int k = 2 * n + 1; k <= 4 * n - 1; ++k) a[k - 1] = 2.0 * (1.0 - k / (4.0 * n));
  return TrigPoly(0.0, std::move(a), {});
}

struct KernelTailSpec {
  PsiSpec psi;
  double beta = 0.0;
  int n = 1;
};

/// S(t) = Σ_{k>=n} ψ(k) e^{ikt}, so that Ψ_{β,n}(t) = Re(e^{-iβπ/2} S(t)).
///
/// For |t| >= 1 a short direct sum is followed by repeated Abel
/// transforms of the remainder, which converge geometrically in
/// k/|1 - e^{it}|. For |t| < 1 (including t = 0 when Σψ converges) the
/// remainder past K is summed by Euler–Maclaurin; its integral term is
/// taken along the ray K + iu, where the integrand decays like e^{-ut},
/// and the derivatives of ψ at K come from a Cauchy integral on |z - K| = K/2.
/// Instances are cheap to copy and safe to share between threads.
class TailSeries {
 public:
  TailSeries(PsiSpec psi, int n) : psi_(std::move(psi)), n_(n) {
    if (n < 1) throw DomainError("tail series: n must be >= 1");
    if (psi_.as<Geometric>() != nullptr) return;
    const int table = psi_.as<Tabulated>() != nullptr ? psi_.analytic_from() : 0;
    em_start_ = std::max({n_, 64, 2 * table + 2});
    abel_floor_ = std::max(n_, table + kMaxAbelTerms + 1);
    cache_hi_ = std::max(em_start_, std::max(abel_floor_, 128) + kMaxAbelTerms + 2);
    values_.resize(static_cast<std::size_t>(cache_hi_ - n_ + 1));
    for (int k = n_; k <= cache_hi_; ++k) values_[k - n_] = psi_.value(static_cast<long double>(k));
    psi_derivatives();
  }

  int n() const { return n_; }
  const PsiSpec& psi() const { return psi_; }

  std::complex<double> operator()(double t) const {
    const double r = reduce_angle(t);
    const double a = std::abs(r);
    std::complex<double> s;
    if (const auto* g = psi_.as<Geometric>()) {
      const std::complex<double> z = std::polar(g->q, a);
      s = std::polar(std::pow(g->q, n_), n_ * a) / (1.0 - z);
    } else if (a >= 1.0) {
      s = abel(a);
    } else {
      if (a == 0.0 && !psi_.summable()) throw SingularPoint("tail series diverges at t = 0");
      s = euler_maclaurin(a);
    }
    return r < 0.0 ? std::conj(s) : s;
  }

  /// Ψ_{β,n}(t).
  double kernel(double t, const Phase& ph) const {
    const auto s = (*this)(t);
    return ph.cos * s.real() + ph.sin * s.imag();
  }

 private:
  static constexpr int kMaxAbelTerms = 24;
  static constexpr int kCauchyPoints = 64;
  static constexpr int kEmOrder = 8;  // Bernoulli terms B_2 .. B_16

  long double cached(int k) const { return values_[k - n_]; }

  /// Σ_{k=lo}^{hi} ψ(k) e^{ikt} from the cached values.
  std::complex<long double> direct(int lo, int hi, double t) const {
    std::complex<long double> s = 0.0L;
    const std::complex<long double> step(std::cos(static_cast<long double>(t)),
                                         std::sin(static_cast<long double>(t)));
    std::complex<long double> e;
    for (int k = lo; k <= hi; ++k) {
      if ((k - lo) % 64 == 0) {
        const long double angle = static_cast<long double>(k) * t;
        e = {std::cos(angle), std::sin(angle)};
      } else {
        e *= step;
      }
      s += cached(k) * e;
    }
    return s;
  }

  std::complex<double> abel(double t) const {
    const int k0 = std::max(abel_floor_, std::min(static_cast<int>(std::ceil(128.0 / t)), 128));
    std::complex<long double> s = direct(n_, k0, t);
    const int m = k0 + 1;
    std::array<long double, kMaxAbelTerms + 1> diff{};
    for (int i = 0; i <= kMaxAbelTerms; ++i) diff[i] = cached(m + i);
    const std::complex<long double> z(std::cos(static_cast<long double>(t)), std::sin(static_cast<long double>(t)));
    const std::complex<long double> inv = 1.0L / (1.0L - z);
    const long double ratio = std::abs(inv);
    std::complex<long double> zpow(std::cos(static_cast<long double>(m) * t), std::sin(static_cast<long double>(m) * t));
    std::complex<long double> factor = inv;
    const long double floor = std::numeric_limits<double>::epsilon() * 1e-2L * std::abs(cached(n_));
    for (int j = 0; j < kMaxAbelTerms; ++j) {
      // diff[0] is the j-th backward difference of ψ at m + j.
      s += diff[0] * zpow * factor;
      if (std::abs(diff[0]) * std::pow(ratio, j + 1) < floor) break;
      for (int i = 0; i + 1 <= kMaxAbelTerms - j; ++i) diff[i] = diff[i + 1] - diff[i];
      zpow *= z;
      factor *= inv;
    }
    return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
  }

  void psi_derivatives() {
    const double K = em_start_;
    const double rho = K / 2.0;
    std::array<std::complex<double>, kCauchyPoints> samples{};
    for (int l = 0; l < kCauchyPoints; ++l) {
      const std::complex<double> w = std::polar(1.0, kTwoPi * l / kCauchyPoints);
      samples[l] = psi_.value(std::complex<double>(K) + rho * w);
    }
    double fact = 1.0;
    for (int i = 0; i < 2 * kEmOrder; ++i) {
      if (i > 0) fact *= i;
      std::complex<double> acc = 0.0;
      for (int l = 0; l < kCauchyPoints; ++l) acc += samples[l] * std::polar(1.0, -kTwoPi * i * l / kCauchyPoints);
      derivative_[i] = (acc.real() / kCauchyPoints) * fact / std::pow(rho, i);
    }
    derivative_[0] = static_cast<double>(cached(em_start_));
  }

  std::complex<double> euler_maclaurin(double t) const {
    static constexpr std::array<double, kEmOrder> kBernoulli = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};
    const int K = em_start_;
    std::complex<long double> head = K > n_ ? direct(n_, K - 1, t) : std::complex<long double>(0.0L);
    const std::complex<double> eK = std::polar(1.0, K * t);

    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [&](double u) -> std::complex<double> {
      return psi_.value(std::complex<double>(K, u)) * std::exp(-u * t);
    };
    const std::complex<double> ray = integrator.integrate(integrand, 1e-13);
    std::complex<double> tail = std::complex<double>(0.0, 1.0) * eK * ray;
    tail += 0.5 * derivative_[0] * eK;

    // g^{(m)}(K) = e^{iKt} Σ_i C(m,i) ψ^{(i)}(K) (it)^{m-i}
    std::array<std::complex<double>, 2 * kEmOrder> it_pow{};
    it_pow[0] = 1.0;
    for (int i = 1; i < 2 * kEmOrder; ++i) it_pow[i] = it_pow[i - 1] * std::complex<double>(0.0, t);
    double fact = 1.0;
    for (int j = 1; j <= kEmOrder; ++j) {
      const int m = 2 * j - 1;
      fact *= (2.0 * j - 1.0) * (2.0 * j);
      std::complex<double> g = 0.0;
      double binom = 1.0;
      for (int i = 0; i <= m; ++i) {
        g += binom * derivative_[i] * it_pow[m - i];
        binom = binom * (m - i) / (i + 1.0);
      }
      tail -= kBernoulli[j - 1] / fact * eK * g;
    }
    return {static_cast<double>(head.real()) + tail.real(), static_cast<double>(head.imag()) + tail.imag()};
  }

  PsiSpec psi_;
  int n_ = 1;
  int em_start_ = 64;
  int abel_floor_ = 1;
  int cache_hi_ = 0;
  std::vector<long double> values_;
  std::array<double, 2 * kEmOrder> derivative_{};
};

/// Σ_{k>=n} ψ(k).
inline double psi_tail_sum(const PsiSpec& psi, int n) {
  if (!psi.summable()) throw SingularPoint("psi tail sum diverges");
  return TailSeries(psi, n)(0.0).real();
}

struct TailEvalOptions {
  long long max_terms = 10'000'000;  ///< cap on the Abel truncation index K
  long long direct_limit = 1 << 16;  ///< above this K the accelerated series is used
  bool accelerate = true;            ///< false: throw ToleranceUnreachable past max_terms
};

namespace detail {

/// Smallest K >= n with (1 + π) ψ(K + 1) / t̂ < tol, or -1 past the cap.
inline long long abel_truncation(const PsiSpec& psi, int n, double t_hat, double tol, long long cap) {
  const double log_target = std::log(tol * t_hat / (1.0 + kPi));
  auto ok = [&](long long k) { return psi.log_value(static_cast<double>(k) + 1.0) < log_target; };
  long long hi = n;
  while (!ok(hi)) {
    if (hi > cap) return -1;
    hi *= 2;
  }
  long long lo = std::max<long long>(n, hi / 2);
  if (ok(lo)) return lo;
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi > cap ? -1 : hi;
}

/// Σ_{k=n}^{K} Δψ(k) D_{k,β}(t) - ψ(n) D_{n-1,β}(t), with D_{k,β} built incrementally.
inline double abel_sum(const PsiSpec& psi, const Phase& ph, int n, long long K, double t) {
  const double c1 = std::cos(t);
  const double s1 = std::sin(t);
  double d = 0.5 * ph.cos;  // D_{0,β}
  double ck = 1.0;
  double sk = 0.0;
  auto advance = [&](long long k) {
    if (k % 64 == 0) {
      ck = std::cos(static_cast<double>(k) * t);
      sk = std::sin(static_cast<double>(k) * t);
    } else {
      const double next = ck * c1 - sk * s1;
      sk = sk * c1 + ck * s1;
      ck = next;
    }
    d += ck * ph.cos + sk * ph.sin;
  };
  for (long long j = 1; j <= n - 1; ++j) advance(j);
  long double sum = -static_cast<long double>(psi(static_cast<double>(n))) * d;
  for (long long k = n; k <= K; ++k) {
    advance(k);
    sum += static_cast<long double>(psi_delta(psi, k)) * d;
  }
  return static_cast<double>(sum);
}

}  // namespace detail

/// Ψ_{β,n}(t) to absolute accuracy tol.
inline double kernel_tail_eval(const KernelTailSpec& spec, double t, double tol = 1e-10,
                               const TailEvalOptions& opts = {}) {
  if (spec.n < 1) throw DomainError("kernel_tail_eval: n must be >= 1");
  if (!(tol > 0.0)) throw DomainError("kernel_tail_eval: tol must be > 0");
  const Phase ph = phase(spec.beta);
  const double r = reduce_angle(t);
  const double t_hat = std::abs(r);
  if (t_hat == 0.0) {
    if (!spec.psi.summable()) throw SingularPoint("kernel_tail_eval: series diverges at t = 0");
    return ph.cos * psi_tail_sum(spec.psi, spec.n);
  }
  const long long K = detail::abel_truncation(spec.psi, spec.n, t_hat, tol, opts.max_terms);
  if (K < 0 && !opts.accelerate) {
    throw ToleranceUnreachable("kernel_tail_eval: more than " + std::to_string(opts.max_terms) +
                               " terms needed for the requested tolerance");
  }
  if (K >= 0 && (K <= opts.direct_limit || !opts.accelerate)) {
    return detail::abel_sum(spec.psi, ph, spec.n, K, r);
  }
  return TailSeries(spec.psi, spec.n).kernel(r, ph);
}

/// ‖Ψ_{β,n}‖_q over [0, 2π]. For q < ∞ the mesh is graded towards t = 0;
/// for q = ∞ the sup is taken over a grid plus Brent refinement.
inline NormResult kernel_tail_norm(const KernelTailSpec& spec, double q, double tol = 1e-8) {
  if (!(q >= 1.0)) throw DomainError("kernel_tail_norm: q must lie in [1, inf]");
  const TailSeries series(spec.psi, spec.n);
  const Phase ph = phase(spec.beta);
  auto f = [&](double t) { return series.kernel(t, ph); };

  if (std::isinf(q)) {
    const bool summable = spec.psi.summable();
    if (!summable && ph.cos != 0.0) throw SingularPoint("kernel_tail_norm: kernel unbounded at t = 0");
    const int grid = 16 * (spec.n + 8);
    const double h = kTwoPi / grid;
    std::vector<double> values(static_cast<std::size_t>(grid));
    for (int j = 0; j < grid; ++j) values[j] = (j == 0 && !summable) ? 0.0 : std::abs(f(j * h));
    std::vector<int> peaks;
    for (int j = 0; j < grid; ++j) {
      if (values[j] >= values[(j + grid - 1) % grid] && values[j] >= values[(j + 1) % grid]) peaks.push_back(j);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](int l, int r) { return values[l] > values[r]; });
    if (peaks.size() > 5) peaks.resize(5);
    const double coarse = *std::max_element(values.begin(), values.end());
    double best = coarse;
    for (int j : peaks) {
      double lo = (j - 1) * h;
      double hi = (j + 1) * h;
      if (!summable) {
        // stay off the singular point
        if (j <= 1) lo = 1e-9;
        if (j >= grid - 1) hi = kTwoPi - 1e-9;
      }
      std::uintmax_t iters = 200;
      auto [x, v] = boost::math::tools::brent_find_minima([&](double t) { return -std::abs(f(t)); }, lo, hi,
                                                          std::numeric_limits<double>::digits / 2, iters);
      (void)x;
      best = std::max(best, -v);
    }
    return {best, best - coarse, 0, true};
  }

  QuadratureOptions opts;
  opts.initial_panels = 2 * (spec.n + 8);
  opts.graded_at = {0.0};
  opts.max_levels = 6;
  return lp_norm(f, q, tol, opts);
}

}  // namespace psiapprox
