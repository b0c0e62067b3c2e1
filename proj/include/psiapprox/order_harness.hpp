#pragma once

// Constructive upper and lower bounds for the class approximation
// functionals, the Lemma-1 sum check and order tables over n.

#include <psiapprox/calculus.hpp>
#include <psiapprox/errors.hpp>
#include <psiapprox/kernels.hpp>
#include <psiapprox/lp_norms.hpp>
#include <psiapprox/psi.hpp>
#include <psiapprox/trig_poly.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace psiapprox {

/// ψ(n) n^e with e = 1/p (C) or 1/p' (L1).
inline double normalizer(const ClassSpec& spec, int n) {
  return spec.psi(static_cast<double>(n)) * std::pow(static_cast<double>(n), spec.normalizer_exponent());
}

/// (1/π) ‖Ψ_{β,n}‖_q with q = p' for C classes and q = p for L1 classes.
inline double upper_bound(const ClassSpec& spec, int n, double tol = 1e-8) {
  if (n < 1) throw DomainError("upper_bound: n must be >= 1");
  const double q = spec.kind == ClassKind::C_class ? conjugate_exponent(spec.p) : spec.p;
  return kernel_tail_norm({spec.psi, spec.beta, n}, q, tol).value / kPi;
}

struct LowerBound {
  double value = 0.0;
  double numerator = 0.0;       ///< ‖g_n‖_2²
  double derivative_norm = 0.0;  ///< c_n
  double dual_norm = 0.0;        ///< ‖g_n‖_s
  TrigPoly extremal;             ///< g_n / c_n, a class member with unit derivative norm
};

/// Duality bound from g_n = V_{2n} - V_n, which is orthogonal to every
/// polynomial of degree <= 2n-1: ‖g_n‖_2² / (c_n ‖g_n‖_s), with c_n the
/// derivative norm in the class metric and s = 1 (C) or p' (L1).
inline LowerBound lower_bound_detail(const ClassSpec& spec, int n) {
  if (n < 1) throw DomainError("lower_bound: n must be >= 1");
  const TrigPoly g = vp_difference(n);
  LowerBound lb;
  lb.numerator = std::pow(l2_norm(g), 2);
  lb.derivative_norm = lp_norm(derivative(g, spec.psi, spec.beta), spec.derivative_metric(), 1e-12).value;
  const double s = spec.kind == ClassKind::C_class ? 1.0 : conjugate_exponent(spec.p);
  lb.dual_norm = lp_norm(g, s, 1e-12).value;
  lb.value = lb.numerator / (lb.derivative_norm * lb.dual_norm);
  lb.extremal = g / lb.derivative_norm;
  return lb;
}

inline double lower_bound(const ClassSpec& spec, int n) { return lower_bound_detail(spec, n).value; }

struct Lemma1Row {
  int n = 0;
  double sum = 0.0;    ///< S(n) = Σ_{k>=n} Δψ(k) k^r
  double lower = 0.0;  ///< ψ(n) n^r
  double slack = 0.0;  ///< S(n) - ψ(n) n^r
  double ratio = 0.0;  ///< S(n) / (ψ(n) n^r)
};

struct Lemma1Report {
  std::vector<Lemma1Row> rows;
  double max_ratio = 0.0;
  double min_slack = 0.0;
  long long cutoff = 0;       ///< first index summed by the tail formula
  double tail_error = 0.0;    ///< size of the last Euler–Maclaurin correction
};

namespace detail {

/// k^r - (k-1)^r without cancellation.
inline double power_step(double k, double r) { return -std::pow(k, r) * std::expm1(r * std::log1p(-1.0 / k)); }

}  // namespace detail

/// S(n) via summation by parts: S(n) = ψ(n) n^r + Σ_{k>n} ψ(k)(k^r - (k-1)^r),
/// so the slack over ψ(n) n^r is a sum of nonnegative terms. Terms up to
/// the cutoff are summed directly (from the top); the rest by Euler–Maclaurin.
inline Lemma1Report lemma1_verify(const PsiSpec& psi, double r, const std::vector<int>& n_values,
                                  long long tail_cap = 1'000'000, double tol = 1e-13) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("lemma1_verify: r must lie in (0, 1]");
  if (n_values.empty()) return {};
  const int n_max = *std::max_element(n_values.begin(), n_values.end());
  if (*std::min_element(n_values.begin(), n_values.end()) < 1) throw DomainError("lemma1_verify: n must be >= 1");
  const long long table = psi.as<Tabulated>() != nullptr ? psi.analytic_from() : 0;
  const long long K = std::max<long long>({n_max + 1LL, 1024LL, 2 * table + 2});
  if (K > tail_cap) throw TailNotControlled("lemma1_verify: cutoff exceeds tail_cap");

  auto h = [&](double x) { return psi.value(x) * detail::power_step(x, r); };
  auto hc = [&](std::complex<double> z) {
    return psi.value(z) * (std::pow(z, r) - std::pow(z - 1.0, r));
  };

  // Σ_{k>=K} h(k) = ∫_K^∞ h + h(K)/2 - h'(K)/12 + h'''(K)/720 - ...
  double tail = 0.0;
  double last_correction = 0.0;
  {
    const double Kd = static_cast<double>(K);
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double integral = kInf;
    try {
      integral = integrator.integrate([&](double u) { return h(Kd + u); }, 1e-14, &err);
    } catch (const std::exception&) {
      integral = kInf;
    }
    if (!std::isfinite(integral) || err > 1e-6 * std::abs(integral) + tol) {
      throw TailNotControlled("lemma1_verify: tail integral does not converge");
    }
    // derivatives from a Cauchy integral on |z - K| = K/2
    constexpr int kPoints = 64;
    const double rho = Kd / 2.0;
    std::array<double, 6> d{};
    for (int i = 1; i <= 5; i += 2) {
      std::complex<double> acc = 0.0;
      for (int l = 0; l < kPoints; ++l) {
        const std::complex<double> w = std::polar(1.0, kTwoPi * l / kPoints);
        acc += hc(Kd + rho * w) * std::pow(w, -i);
      }
      d[i] = acc.real() / kPoints * std::tgamma(i + 1.0) / std::pow(rho, i);
    }
    const double c1 = -d[1] / 12.0;
    const double c3 = d[3] / 720.0;
    last_correction = std::abs(d[5] / 30240.0);
    tail = integral + 0.5 * h(Kd) + c1 + c3;
    // error relative to the smallest reported sum, which is at least ψ(n_max) n_max^r
    const double scale = psi(static_cast<double>(n_max)) * std::pow(static_cast<double>(n_max), r);
    if (last_correction > tol * std::max(std::abs(tail), scale)) {
      throw TailNotControlled("lemma1_verify: Euler-Maclaurin remainder above tolerance");
    }
  }

  // suffix[k] = Σ_{j>k} h(j) for k in [1, K-1], accumulated from the top.
  std::vector<long double> suffix(static_cast<std::size_t>(K) + 1, 0.0L);
  long double acc = tail;
  for (long long k = K - 1; k >= 1; --k) {
    suffix[k] = acc;
    acc += h(static_cast<double>(k));
  }

  Lemma1Report report;
  report.cutoff = K;
  report.tail_error = last_correction;
  report.min_slack = kInf;
  for (int n : n_values) {
    Lemma1Row row;
    row.n = n;
    row.lower = psi(static_cast<double>(n)) * std::pow(static_cast<double>(n), r);
    row.slack = static_cast<double>(suffix[n]);
    row.sum = row.lower + row.slack;
    row.ratio = row.sum / row.lower;
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.min_slack = std::min(report.min_slack, row.slack);
    report.rows.push_back(row);
  }
  return report;
}

struct BoundRecord {
  int n = 0;
  double upper = 0.0;
  double lower = 0.0;
  double normalizer = 0.0;
  double upper_ratio = 0.0;
  double lower_ratio = 0.0;
};

struct RatioBand {
  double upper_min = 0.0;
  double upper_max = 0.0;
  double lower_min = 0.0;
  double lower_max = 0.0;
  double upper_spread() const { return upper_max / upper_min; }
  double lower_spread() const { return lower_max / lower_min; }
};

struct RecordFailure {
  int n = 0;
  std::string message;
};

struct OrderTable {
  std::vector<BoundRecord> records;
  std::vector<RecordFailure> failures;
  std::optional<double> slope;           ///< least squares slope of log upper against log n
  std::optional<double> slope_expected;  ///< -r + 1/p (C) or -r + 1/p' (L1) for power-type ψ
  RatioBand band;
};

struct OrderOptions {
  double tol = 1e-8;
  int jobs = 1;
};

/// Least squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double md = static_cast<double>(m);
  return (md * sxy - sx * sy) / (md * sxx - sx * sx);
}

inline BoundRecord bound_record(const ClassSpec& spec, int n, double tol) {
  BoundRecord rec;
  rec.n = n;
  rec.upper = upper_bound(spec, n, tol);
  rec.lower = lower_bound(spec, n);
  rec.normalizer = normalizer(spec, n);
  rec.upper_ratio = rec.upper / rec.normalizer;
  rec.lower_ratio = rec.lower / rec.normalizer;
  return rec;
}

/// BoundRecords for every n, computed by a pool of `jobs` workers and
/// merged in the order of n_values. Failures are collected per n.
inline OrderTable order_table(const ClassSpec& spec, const std::vector<int>& n_values, const OrderOptions& opts = {}) {
  validate(spec);
  const std::size_t m = n_values.size();
  std::vector<std::optional<BoundRecord>> slots(m);
  std::vector<std::string> errors(m);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < m; i = next++) {
      try {
        slots[i] = bound_record(spec, n_values[i], opts.tol);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::clamp(opts.jobs, 1, static_cast<int>(std::max<std::size_t>(m, 1)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  OrderTable table;
  for (std::size_t i = 0; i < m; ++i) {
    if (slots[i]) {
      table.records.push_back(*slots[i]);
    } else {
      table.failures.push_back({n_values[i], errors[i]});
    }
  }
  if (!table.records.empty()) {
    auto& b = table.band;
    b.upper_min = b.lower_min = kInf;
    for (const auto& r : table.records) {
      b.upper_min = std::min(b.upper_min, r.upper_ratio);
      b.upper_max = std::max(b.upper_max, r.upper_ratio);
      b.lower_min = std::min(b.lower_min, r.lower_ratio);
      b.lower_max = std::max(b.lower_max, r.lower_ratio);
    }
  }
  if (table.records.size() >= 2) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : table.records) {
      xs.push_back(r.n);
      ys.push_back(r.upper);
    }
    table.slope = loglog_slope(xs, ys);
  }
  const double r = spec.psi.power_exponent();
  if (!std::isnan(r) && spec.psi.as<Tabulated>() == nullptr) {
    table.slope_expected = -r + spec.normalizer_exponent();
  }
  return table;
}

/// Whether the later half of a sequence stays within `factor` of the earlier half's maximum.
inline bool no_monotone_drift(const std::vector<double>& values, double factor = 2.0) {
  if (values.size() < 2) return true;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  const double first = *std::max_element(values.begin(), mid);
  const double second = *std::max_element(mid, values.end());
  return second <= factor * first;
}

}  // namespace psiapprox
