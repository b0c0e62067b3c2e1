#pragma once

// Weight functions ψ(t), t >= 1, and finite-horizon tests of the class
// conditions used by the order estimates (doubling set B, the sets Θ_p,
// the sign of Δ²(1/ψ) and the partial sums Σ ψ(n)/(kψ(k))).

#include <psiapprox/errors.hpp>
#include <psiapprox/math.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace psiapprox {

/// ψ(t) = t^{-r}
struct Power {
  double r = 1.0;
};

/// ψ(t) = t^{-r} ln^{-α}(t + c)
struct PowerLogDamped {
  double r = 1.0;
  double alpha = 0.0;
  double c = 1.0;
};

/// ψ(t) = t^{-r} ln^{α}(t + c); decreasing on [1, ∞) when c > e^{α/r} - 1.
struct PowerLogGrown {
  double r = 1.0;
  double alpha = 0.0;
  double c = 1.0;
};

/// ψ(t) = q^t
struct Geometric {
  double q = 0.5;
};

/// Values ψ(1), ..., ψ(M) with linear interpolation in between and the
/// power tail ψ(M)(M/t)^s beyond M.
struct Tabulated {
  std::vector<double> values;
  double tail_exponent = 0.0;
};

class PsiSpec {
 public:
  using Family = std::variant<Power, PowerLogDamped, PowerLogGrown, Geometric, Tabulated>;

  PsiSpec() : PsiSpec(Power{1.0}) {}
  PsiSpec(Family family) : family_(std::move(family)) { validate(); }  // NOLINT(google-explicit-constructor)

  static PsiSpec power(double r) { return PsiSpec(Power{r}); }
  static PsiSpec power_log_damped(double r, double alpha, double c) {
    return PsiSpec(PowerLogDamped{r, alpha, c});
  }
  static PsiSpec power_log_grown(double r, double alpha, double c) {
    return PsiSpec(PowerLogGrown{r, alpha, c});
  }
  static PsiSpec geometric(double q) { return PsiSpec(Geometric{q}); }
  static PsiSpec tabulated(std::vector<double> values, double tail_exponent = 0.0) {
    return PsiSpec(Tabulated{std::move(values), tail_exponent});
  }

  const Family& family() const { return family_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&family_);
  }

  std::string name() const {
    static constexpr const char* kNames[] = {"power", "power_log_damped", "power_log_grown", "geometric",
                                             "tabulated"};
    return kNames[family_.index()];
  }

  /// Power exponent r of the algebraic families (decay rate of ψ), NaN otherwise.
  double power_exponent() const {
    if (auto* p = as<Power>()) return p->r;
    if (auto* p = as<PowerLogDamped>()) return p->r;
    if (auto* p = as<PowerLogGrown>()) return p->r;
    if (auto* p = as<Tabulated>()) return p->tail_exponent;
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Σ ψ(k) < ∞.
  bool summable() const {
    if (auto* p = as<Power>()) return p->r > 1.0;
    if (auto* p = as<PowerLogDamped>()) return p->r > 1.0 || (p->r == 1.0 && p->alpha > 1.0);
    if (auto* p = as<PowerLogGrown>()) return p->r > 1.0;
    if (as<Geometric>()) return true;
    return std::get<Tabulated>(family_).tail_exponent > 1.0;
  }

  /// First index past the tabulated range (1 for closed-form families).
  int analytic_from() const {
    if (auto* p = as<Tabulated>()) return static_cast<int>(p->values.size());
    return 1;
  }

  /// Evaluation without the domain check; also accepts complex arguments,
  /// where the tabulated family continues its power tail analytically.
  template <class Real>
  Real value(Real t) const {
    using std::exp;
    using std::log;
    using std::pow;
    return std::visit(
        [&](const auto& f) -> Real {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Power>) {
            return pow(t, Real(-f.r));
          } else if constexpr (std::is_same_v<F, PowerLogDamped>) {
            return pow(t, Real(-f.r)) * pow(log(t + Real(f.c)), Real(-f.alpha));
          } else if constexpr (std::is_same_v<F, PowerLogGrown>) {
            return pow(t, Real(-f.r)) * pow(log(t + Real(f.c)), Real(f.alpha));
          } else if constexpr (std::is_same_v<F, Geometric>) {
            return exp(t * Real(std::log(f.q)));
          } else {
            const auto m = static_cast<double>(f.values.size());
            if constexpr (std::is_floating_point_v<Real>) {
              if (t < Real(m)) {
                const auto lo = static_cast<std::size_t>(t);
                const Real frac = t - Real(lo);
                return Real(f.values[lo - 1]) + frac * Real(f.values[lo] - f.values[lo - 1]);
              }
            }
            return Real(f.values.back()) * pow(Real(m) / t, Real(f.tail_exponent));
          }
        },
        family_);
  }

  /// ψ(t), t >= 1.
  template <class Real = double>
  Real operator()(Real t) const {
    if (!(t >= Real(1))) throw DomainError("psi: argument must satisfy t >= 1, got " + std::to_string(double(t)));
    return value(t);
  }

  /// ln ψ(t), finite even where ψ(t) underflows.
  double log_value(double t) const {
    if (!(t >= 1.0)) throw DomainError("psi: argument must satisfy t >= 1");
    return std::visit(
        [&](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Power>) {
            return -f.r * std::log(t);
          } else if constexpr (std::is_same_v<F, PowerLogDamped>) {
            return -f.r * std::log(t) - f.alpha * std::log(std::log(t + f.c));
          } else if constexpr (std::is_same_v<F, PowerLogGrown>) {
            return -f.r * std::log(t) + f.alpha * std::log(std::log(t + f.c));
          } else if constexpr (std::is_same_v<F, Geometric>) {
            return t * std::log(f.q);
          } else {
            return std::log(value(t));
          }
        },
        family_);
  }

  /// ln ψ(t+1) - ln ψ(t), computed without cancellation.
  double log_step(double t) const {
    return std::visit(
        [&](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Power>) {
            return -f.r * std::log1p(1.0 / t);
          } else if constexpr (std::is_same_v<F, PowerLogDamped> || std::is_same_v<F, PowerLogGrown>) {
            const double sign = std::is_same_v<F, PowerLogGrown> ? 1.0 : -1.0;
            const double log_ratio = std::log1p(std::log1p(1.0 / (t + f.c)) / std::log(t + f.c));
            return -f.r * std::log1p(1.0 / t) + sign * f.alpha * log_ratio;
          } else if constexpr (std::is_same_v<F, Geometric>) {
            return std::log(f.q);
          } else {
            if (t >= static_cast<double>(f.values.size())) return -f.tail_exponent * std::log1p(1.0 / t);
            return std::log(value(t + 1.0)) - std::log(value(t));
          }
        },
        family_);
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Power>) {
            if (!(f.r > 0.0)) throw DomainError("power: r must be > 0");
          } else if constexpr (std::is_same_v<F, PowerLogDamped>) {
            if (!(f.r > 0.0)) throw DomainError("power_log_damped: r must be > 0");
            if (!(f.alpha >= 0.0)) throw DomainError("power_log_damped: alpha must be >= 0");
            if (!(f.c > 0.0)) throw DomainError("power_log_damped: c must be > 0");
          } else if constexpr (std::is_same_v<F, PowerLogGrown>) {
            if (!(f.r > 0.0)) throw DomainError("power_log_grown: r must be > 0");
            if (!(f.alpha >= 0.0)) throw DomainError("power_log_grown: alpha must be >= 0");
            if (!(f.c > 0.0 && f.c > std::expm1(f.alpha / f.r)))
              throw DomainError("power_log_grown: c must exceed exp(alpha/r) - 1");
          } else if constexpr (std::is_same_v<F, Geometric>) {
            if (!(f.q > 0.0 && f.q < 1.0)) throw DomainError("geometric: q must lie in (0, 1)");
          } else {
            if (f.values.empty()) throw DomainError("tabulated: at least one value required");
            for (std::size_t i = 0; i < f.values.size(); ++i) {
              if (!(f.values[i] > 0.0)) throw DomainError("tabulated: values must be positive");
              if (i > 0 && f.values[i] > f.values[i - 1])
                throw DomainError("tabulated: values must be nonincreasing");
            }
            if (!(f.tail_exponent >= 0.0)) throw DomainError("tabulated: tail_exponent must be >= 0");
          }
        },
        family_);
  }

  Family family_;
};

/// ψ(t) for t >= 1.
inline double psi_eval(const PsiSpec& spec, double t) { return spec(t); }

/// Δψ(k) = ψ(k) - ψ(k+1).
inline double psi_delta(const PsiSpec& spec, long long k) {
  if (k < 1) throw DomainError("psi_delta: k must be >= 1");
  const auto t = static_cast<double>(k);
  return -spec(t) * std::expm1(spec.log_step(t));
}

/// Δ²(1/ψ)(k) = 1/ψ(k) - 2/ψ(k+1) + 1/ψ(k+2), scaled back from ψ(k)·Δ²(1/ψ)(k).
inline double delta2_reciprocal_scaled(const PsiSpec& spec, long long k) {
  if (k < 1) throw DomainError("delta2_reciprocal: k must be >= 1");
  const auto t = static_cast<double>(k);
  const double l1 = spec.log_step(t);
  const double l2 = spec.log_step(t + 1.0);
  return std::expm1(-l1 - l2) - 2.0 * std::expm1(-l1);
}

inline double delta2_reciprocal(const PsiSpec& spec, long long k) {
  return delta2_reciprocal_scaled(spec, k) / spec(static_cast<double>(k));
}

enum class Delta2Sign { Convex, Concave, Mixed };
enum class ThetaStatus { Found, InconclusiveAtHorizon };

inline const char* to_string(Delta2Sign s) {
  switch (s) {
    case Delta2Sign::Convex:
      return "convex";
    case Delta2Sign::Concave:
      return "concave";
    default:
      return "mixed";
  }
}

inline const char* to_string(ThetaStatus s) {
  return s == ThetaStatus::Found ? "found" : "inconclusive_at_horizon";
}

struct ConditionReport {
  double p = 1.0;
  int horizon = 0;
  bool in_b = false;
  double b_ratio_sup = 0.0;          ///< sup of ψ(t)/ψ(2t) over the grid
  std::optional<double> theta_p_alpha;  ///< smallest α > 1/p found on the search grid
  double theta_majorant = kInf;      ///< measured K for t^α ψ(t) at the reported α
  ThetaStatus theta_status = ThetaStatus::InconclusiveAtHorizon;
  Delta2Sign delta2_sign = Delta2Sign::Mixed;
  double nerb2_sum_bound = 0.0;      ///< max_n Σ_{k<n} ψ(n)/(kψ(k))
};

/// Log-spaced grid on [1, horizon], 64 points per decade, both ends included.
inline std::vector<double> log_grid(double horizon) {
  const int count = 1 + static_cast<int>(std::ceil(64.0 * std::log10(horizon)));
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[i] = std::pow(horizon, static_cast<double>(i) / (count - 1));
  grid.back() = horizon;
  return grid;
}

/// Smallest constant K with t1^α ψ(t1) <= K t2^α ψ(t2) for all grid points t1 > t2.
inline double almost_decreasing_constant(const PsiSpec& spec, double alpha, const std::vector<double>& grid) {
  double running_min = kInf;
  double worst = 0.0;
  for (double t : grid) {
    const double log_h = alpha * std::log(t) + spec.log_value(t);
    if (running_min < kInf) worst = std::max(worst, log_h - running_min);
    running_min = std::min(running_min, log_h);
  }
  return std::exp(worst);
}

struct ExponentSearch {
  std::optional<double> alpha;
  double majorant = kInf;
};

/// Searches α = above + jδ, j = 1..steps, for the first exponent making
/// t^α ψ(t) almost decreasing with constant at most max_constant.
inline ExponentSearch find_almost_decreasing_exponent(const PsiSpec& spec, double above, double horizon,
                                                      double max_constant = 10.0, double step = 0.05,
                                                      int steps = 200) {
  const auto grid = log_grid(horizon);
  for (int j = 1; j <= steps; ++j) {
    const double alpha = above + j * step;
    const double k = almost_decreasing_constant(spec, alpha, grid);
    if (k <= max_constant) return {alpha, k};
  }
  return {};
}

inline ConditionReport check_class_conditions(const PsiSpec& spec, double p, int horizon = 10000,
                                              double tol = 1e-12) {
  if (horizon < 16) throw DomainError("check_class_conditions: horizon must be >= 16");
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("check_class_conditions: p must lie in [1, inf)");

  ConditionReport report;
  report.p = p;
  report.horizon = horizon;
  const auto grid = log_grid(horizon);

  // Doubling test. Unbounded growth of ψ(t)/ψ(2t) shows up as a jump between
  // the lower and upper halves of the log grid.
  double lower_half = 0.0;
  double upper_half = 0.0;
  const double split = std::sqrt(static_cast<double>(horizon));
  for (double t : grid) {
    const double log_ratio = spec.log_value(t) - spec.log_value(2.0 * t);
    const double ratio = std::exp(log_ratio);
    report.b_ratio_sup = std::max(report.b_ratio_sup, ratio);
    if (t <= split) {
      lower_half = std::max(lower_half, ratio);
    } else {
      upper_half = std::max(upper_half, ratio);
    }
  }
  report.in_b = std::isfinite(report.b_ratio_sup) && upper_half <= 2.0 * lower_half;

  const auto search = find_almost_decreasing_exponent(spec, 1.0 / p, horizon);
  report.theta_p_alpha = search.alpha;
  report.theta_majorant = search.majorant;
  report.theta_status = search.alpha ? ThetaStatus::Found : ThetaStatus::InconclusiveAtHorizon;

  bool convex = true;
  bool concave = true;
  for (long long k = 1; k <= horizon; ++k) {
    const double d = delta2_reciprocal_scaled(spec, k);
    if (d < -tol) convex = false;
    if (d > tol) concave = false;
  }
  report.delta2_sign = convex ? Delta2Sign::Convex : (concave ? Delta2Sign::Concave : Delta2Sign::Mixed);

  // T(n) = ψ(n) Σ_{k<n} 1/(kψ(k)) via T(n+1) = (ψ(n+1)/ψ(n)) (T(n) + 1/n).
  double partial = 0.0;
  for (long long n = 1; n < horizon; ++n) {
    partial = std::exp(spec.log_step(static_cast<double>(n))) * (partial + 1.0 / static_cast<double>(n));
    report.nerb2_sum_bound = std::max(report.nerb2_sum_bound, partial);
  }
  return report;
}

}  // namespace psiapprox
