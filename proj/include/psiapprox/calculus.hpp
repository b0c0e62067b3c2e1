#pragma once

// (ψ,β)-derivative and its inverse as exact coefficient transforms on
// trigonometric polynomials, class membership and Bernstein ratios.

#include <psiapprox/errors.hpp>
#include <psiapprox/lp_norms.hpp>
#include <psiapprox/math.hpp>
#include <psiapprox/psi.hpp>
#include <psiapprox/trig_poly.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace psiapprox {

enum class ClassKind {
  C_class,   ///< C^ψ_{β,p}: φ in the unit ball of L_p, error measured in C
  L1_class,  ///< L^ψ_{β,1}: φ in the unit ball of L_1, error measured in L_p
};

inline const char* to_string(ClassKind k) { return k == ClassKind::C_class ? "C" : "L1"; }

struct ClassSpec {
  PsiSpec psi;
  double beta = 0.0;
  double p = 2.0;  ///< in [1, ∞]; the class exponent (C) or the target metric (L1)
  ClassKind kind = ClassKind::C_class;

  /// Exponent whose Θ-condition the class needs: p for C, p' for L1.
  double theta_exponent() const { return kind == ClassKind::C_class ? p : conjugate_exponent(p); }
  /// Norm of the (ψ,β)-derivative bounded by 1 in the class.
  double derivative_metric() const { return kind == ClassKind::C_class ? p : 1.0; }
  /// Exponent e of the normaliser ψ(n) n^e: 1/p for C, 1/p' for L1.
  double normalizer_exponent() const {
    const double e = kind == ClassKind::C_class ? p : conjugate_exponent(p);
    return std::isinf(e) ? 0.0 : 1.0 / e;
  }
};

inline void validate(const ClassSpec& spec) {
  if (!(spec.p >= 1.0)) throw ValidationError("class spec: p must lie in [1, inf]");
  if (!std::isfinite(spec.beta)) throw ValidationError("class spec: beta must be finite");
}

/// Harmonic k: amplitude / ψ(k), phase advanced by βπ/2; the mean is dropped.
inline TrigPoly derivative(const TrigPoly& f, const PsiSpec& psi, double beta) {
  const Phase ph = phase(beta);
  const int m = f.degree();
  std::vector<double> a(static_cast<std::size_t>(m));
  std::vector<double> b(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    const double w = psi(static_cast<double>(k));
    a[k - 1] = (f.a(k) * ph.cos + f.b(k) * ph.sin) / w;
    b[k - 1] = (f.b(k) * ph.cos - f.a(k) * ph.sin) / w;
  }
  return TrigPoly(0.0, std::move(a), std::move(b));
}

/// a0/2 + (1/π) ∫ Ψ_β(· - t) φ(t) dt: harmonic k scaled by ψ(k), phase retarded by βπ/2.
inline TrigPoly integral(const TrigPoly& phi, const PsiSpec& psi, double beta, double a0 = 0.0) {
  if (std::abs(phi.mean()) > 1e-12) throw MeanNotZero("integral: phi must have zero mean");
  const Phase ph = phase(beta);
  const int m = phi.degree();
  std::vector<double> a(static_cast<std::size_t>(m));
  std::vector<double> b(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    const double w = psi(static_cast<double>(k));
    a[k - 1] = (phi.a(k) * ph.cos - phi.b(k) * ph.sin) * w;
    b[k - 1] = (phi.a(k) * ph.sin + phi.b(k) * ph.cos) * w;
  }
  return TrigPoly(a0, std::move(a), std::move(b));
}

struct Membership {
  double derivative_norm = 0.0;
  bool is_member = true;
};

/// ‖f^ψ_β‖ in the class metric (L_p for C, L_1 for L1) against the unit ball.
inline Membership membership(const TrigPoly& f, const ClassSpec& spec, double tol = 1e-9) {
  const TrigPoly g = derivative(f, spec.psi, spec.beta);
  const double norm = g.is_zero() ? 0.0 : lp_norm(g, spec.derivative_metric(), 1e-12).value;
  return {norm, norm <= 1.0 + tol};
}

/// ‖f^ψ_β‖_p ψ(m) / ‖f‖_p with m = degree(f).
inline double bernstein_ratio(const TrigPoly& f, const PsiSpec& psi, double beta, double p) {
  if (f.is_zero()) throw ZeroPolynomial("bernstein_ratio: f must be nonzero");
  const int m = f.degree();
  if (m < 1) throw DomainError("bernstein_ratio: f must have degree >= 1");
  const TrigPoly g = derivative(f, psi, beta);
  return lp_norm(g, p, 1e-12).value * psi(static_cast<double>(m)) / lp_norm(f, p, 1e-12).value;
}

/// Θ-condition and Δ²(1/ψ) report for the class, or ValidationError.
inline ConditionReport check_admissible(const ClassSpec& spec, int horizon = 10000) {
  validate(spec);
  const double q = spec.theta_exponent();
  // Θ_∞ only asks for some α > 0; probe it as Θ_p with p large.
  ConditionReport report = check_class_conditions(spec.psi, std::isinf(q) ? 1e6 : q, horizon);
  if (report.theta_status != ThetaStatus::Found) {
    throw ValidationError("class spec: no exponent alpha > 1/" + std::to_string(q) + " makes t^alpha psi(t) " +
                          "almost decreasing up to t = " + std::to_string(horizon));
  }
  return report;
}

}  // namespace psiapprox
