#pragma once

// L_p norms, sup norms and dual pairings of 2π-periodic functions, with the
// non-normalised convention ‖f‖_p = (∫_0^{2π} |f|^p)^{1/p}.
//
// Quadrature is composite 16-point Gauss–Legendre on uniform panels. Sign
// changes of f inside a panel are located and the panel is split there so
// |f|^p is integrated piecewise-smoothly; pieces touching a root use the
// substitution x = r + ℓs² to flatten the (x - r)^p endpoint behaviour.
// Declared singular points get a geometric mesh down to min_radius and the
// remaining neighbourhood is estimated from a local power-law fit.

#include <psiapprox/errors.hpp>
#include <psiapprox/math.hpp>
#include <psiapprox/trig_poly.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

namespace psiapprox {

struct NormResult {
  double value = 0.0;
  double error_estimate = 0.0;  ///< difference between the last two refinement levels
  int mesh_level = 0;
  bool converged = true;
};

struct QuadratureOptions {
  int initial_panels = 64;
  int max_levels = 8;
  std::vector<double> graded_at;  ///< singular points, taken modulo 2π
  double min_radius = 1e-12;      ///< innermost graded radius; the rest is extrapolated
};

namespace detail {

struct GaussRule {
  std::array<double, 16> x{};  // ascending on [-1, 1]
  std::array<double, 16> w{};
};

inline const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 16>;
    const auto& ax = G::abscissa();
    const auto& aw = G::weights();
    GaussRule r;
    for (std::size_t i = 0; i < 8; ++i) {
      r.x[7 - i] = -ax[i];
      r.w[7 - i] = aw[i];
      r.x[8 + i] = ax[i];
      r.w[8 + i] = aw[i];
    }
    return r;
  }();
  return rule;
}

inline double abs_pow(double v, double p) {
  const double a = std::abs(v);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

/// ∫_a^b g(x) dx with one Gauss–Legendre panel.
template <class G>
double gauss_panel(G&& g, double a, double b) {
  const auto& rule = gauss16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < 16; ++i) s += rule.w[i] * g(mid + half * rule.x[i]);
  return s * half;
}

/// ∫ |f|^p over [root, root + len] (len may be negative) with x = root + len·s².
template <class F>
double root_piece(F& f, double root, double len, double p) {
  const auto& rule = gauss16();
  double s = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const double u = 0.5 * (rule.x[i] + 1.0);
    s += rule.w[i] * abs_pow(f(root + len * u * u), p) * 2.0 * u;
  }
  return 0.5 * s * std::abs(len);
}

template <class F>
double find_root(F& f, double lo, double hi, double flo, double fhi) {
  std::uintmax_t iters = 80;
  auto [a, b] = boost::math::tools::toms748_solve([&](double x) { return f(x); }, lo, hi, flo, fhi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (a + b);
}

/// ∫_a^b |f|^p, splitting at sign changes detected among the panel samples.
template <class F>
double abs_pow_panel(F& f, double a, double fa, double b, double fb, double p) {
  const auto& rule = gauss16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::array<double, 18> xs{};
  std::array<double, 18> vs{};
  xs[0] = a;
  vs[0] = fa;
  for (std::size_t i = 0; i < 16; ++i) {
    xs[i + 1] = mid + half * rule.x[i];
    vs[i + 1] = f(xs[i + 1]);
  }
  xs[17] = b;
  vs[17] = fb;

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if ((vs[i] < 0.0 && vs[i + 1] > 0.0) || (vs[i] > 0.0 && vs[i + 1] < 0.0)) {
      roots.push_back(find_root(f, xs[i], xs[i + 1], vs[i], vs[i + 1]));
    }
  }
  if (roots.empty()) {
    double s = 0.0;
    for (std::size_t i = 0; i < 16; ++i) s += rule.w[i] * abs_pow(vs[i + 1], p);
    return s * half;
  }

  double total = 0.0;
  // a -> first root, root -> root (split at midpoint), last root -> b.
  total += root_piece(f, roots.front(), a - roots.front(), p);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    const double m = 0.5 * (roots[i] + roots[i + 1]);
    total += root_piece(f, roots[i], m - roots[i], p);
    total += root_piece(f, roots[i + 1], m - roots[i + 1], p);
  }
  total += root_piece(f, roots.back(), b - roots.back(), p);
  return total;
}

struct SegmentIntegral {
  double value = 0.0;
  bool integrable = true;
};

/// Contribution of [s, s + dir·ρ] from |f| ≈ A|x - s|^{-γ}, fitted at radii ρ and 2ρ.
inline SegmentIntegral extrapolate_core(double g1, double g2, double rho, double p) {
  if (g1 == 0.0) return {0.0, true};
  if (g2 == 0.0) return {kInf, false};
  const double gamma = std::log2(g1 / g2);
  const double exponent = 1.0 - p * gamma;
  if (exponent <= 1e-3) return {kInf, false};
  return {abs_pow(g1, p) * rho / exponent, true};
}

/// ∫_A^B |f|^p on `panels` uniform panels, optionally graded towards either end.
template <class F>
SegmentIntegral abs_pow_segment(F& f, double lo, double hi, int panels, double p, bool grade_lo, bool grade_hi,
                                double min_radius) {
  SegmentIntegral out;
  const double h = (hi - lo) / panels;
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(panels) + 128);

  auto geometric = [&](double anchor, double dir, std::vector<double>& pts) {
    // anchor + dir·ρ_j, ρ_0 = h, ρ_{j+1} = ρ_j/2, stopping at min_radius.
    for (double rho = h; rho >= min_radius; rho *= 0.5) pts.push_back(anchor + dir * rho);
  };

  std::vector<double> left;
  if (grade_lo) geometric(lo, 1.0, left);
  std::reverse(left.begin(), left.end());
  if (grade_lo) {
    edges.insert(edges.end(), left.begin(), left.end());
  } else {
    edges.push_back(lo);
  }
  const int first = 1;
  const int last = grade_hi ? panels - 1 : panels;
  for (int i = first; i <= last; ++i) edges.push_back(i == panels ? hi : lo + i * h);
  if (grade_hi) {
    std::vector<double> right;
    geometric(hi, -1.0, right);
    // right[0] = hi - h already present as the last uniform edge
    for (std::size_t j = 1; j < right.size(); ++j) edges.push_back(right[j]);
  }

  std::vector<double> values(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) values[i] = f(edges[i]);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    out.value += abs_pow_panel(f, edges[i], values[i], edges[i + 1], values[i + 1], p);
  }

  auto core = [&](std::size_t inner, std::size_t outer, double rho) {
    auto c = extrapolate_core(std::abs(values[inner]), std::abs(values[outer]), rho, p);
    out.value += c.value;
    out.integrable = out.integrable && c.integrable;
  };
  if (grade_lo && edges.size() >= 2) core(0, 1, edges[0] - lo);
  if (grade_hi && edges.size() >= 2) {
    const std::size_t n = edges.size();
    core(n - 1, n - 2, hi - edges[n - 1]);
  }
  return out;
}

/// ∫_0^{2π} |f|^p with the given number of base panels.
template <class F>
SegmentIntegral abs_pow_periodic(F& f, int panels, double p, const std::vector<double>& graded_at,
                                 double min_radius) {
  if (graded_at.empty()) return abs_pow_segment(f, 0.0, kTwoPi, panels, p, false, false, min_radius);

  std::vector<double> pts;
  for (double s : graded_at) {
    double r = std::fmod(s, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    pts.push_back(r);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  SegmentIntegral total;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double lo = pts[i];
    const double hi = i + 1 < pts.size() ? pts[i + 1] : pts[0] + kTwoPi;
    const int seg_panels = std::max(2, static_cast<int>(std::ceil(panels * (hi - lo) / kTwoPi)));
    auto seg = abs_pow_segment(f, lo, hi, seg_panels, p, true, true, min_radius);
    total.value += seg.value;
    total.integrable = total.integrable && seg.integrable;
  }
  return total;
}

}  // namespace detail

/// ‖f‖_p over [0, 2π] with dyadic refinement until successive levels differ
/// by less than tol (relative). NormResult::converged is false when the
/// level cap is hit; value is then the finest level.
template <class F>
  requires(!std::is_same_v<std::remove_cvref_t<F>, TrigPoly>)
NormResult lp_norm(F&& f, double p, double tol = 1e-8, const QuadratureOptions& opts = {}) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("lp_norm: p must lie in [1, inf)");
  if (!(tol > 0.0)) throw DomainError("lp_norm: tol must be > 0");
  auto& fn = f;
  NormResult result;
  result.converged = false;
  double previous = -1.0;
  for (int level = 0; level <= opts.max_levels; ++level) {
    const int panels = opts.initial_panels << level;
    const auto integral = detail::abs_pow_periodic(fn, panels, p, opts.graded_at, opts.min_radius);
    if (!integral.integrable) {
      return {kInf, kInf, level, false};
    }
    const double value = std::pow(integral.value, 1.0 / p);
    result.value = value;
    result.mesh_level = level;
    if (previous >= 0.0) {
      result.error_estimate = std::abs(value - previous);
      if (result.error_estimate <= tol * value || result.error_estimate == 0.0) {
        result.converged = true;
        return result;
      }
    }
    previous = value;
  }
  return result;
}

/// max |f| over [0, 2π]: a uniform grid of at least 8·expected_degree points,
/// then Brent refinement around the five largest local maxima.
template <class F>
NormResult sup_norm(F&& f, double tol = 1e-10, int expected_degree = 16) {
  (void)tol;
  const int grid = std::max(64, 16 * std::max(expected_degree, 1));
  const double h = kTwoPi / grid;
  std::vector<double> values(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) values[j] = std::abs(f(j * h));

  std::vector<int> peaks;
  for (int j = 0; j < grid; ++j) {
    const double prev = values[(j + grid - 1) % grid];
    const double next = values[(j + 1) % grid];
    if (values[j] >= prev && values[j] >= next) peaks.push_back(j);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int l, int r) { return values[l] > values[r]; });
  if (peaks.size() > 5) peaks.resize(5);

  const double coarse = *std::max_element(values.begin(), values.end());
  double best = coarse;
  for (int j : peaks) {
    const double lo = (j - 1) * h;
    const double hi = (j + 1) * h;
    auto neg = [&](double x) { return -std::abs(f(x)); };
    std::uintmax_t iters = 200;
    auto [x, v] = boost::math::tools::brent_find_minima(neg, lo, hi, std::numeric_limits<double>::digits / 2, iters);
    (void)x;
    best = std::max(best, -v);
  }
  return {best, best - coarse, 0, true};
}

/// ‖p‖_q of a trigonometric polynomial: Parseval for q = 2, sup for q = ∞,
/// root-split quadrature otherwise.
inline NormResult lp_norm(const TrigPoly& poly, double q, double tol = 1e-10) {
  if (std::isinf(q)) return sup_norm(poly, tol, poly.degree());
  if (q == 2.0) return {l2_norm(poly), 0.0, 0, true};
  QuadratureOptions opts;
  opts.initial_panels = 2 * poly.degree() + 16;
  return lp_norm([&poly](double t) { return poly(t); }, q, tol, opts);
}

/// ∫_{-π}^{π} f g for two polynomials, exactly from the coefficients.
inline double dual_pairing(const TrigPoly& f, const TrigPoly& g) {
  double s = f.a0() * g.a0() / 2.0;
  const int m = std::min(f.degree(), g.degree());
  for (int k = 1; k <= m; ++k) s += f.a(k) * g.a(k) + f.b(k) * g.b(k);
  return kPi * s;
}

/// ∫_{-π}^{π} f g for a callable f against a polynomial g, by composite
/// Gauss–Legendre with doubling until the relative change is below tol.
template <class F>
  requires(!std::is_same_v<std::remove_cvref_t<F>, TrigPoly>)
double dual_pairing(F&& f, const TrigPoly& g, double tol = 1e-10) {
  double previous = kInf;
  double value = 0.0;
  for (int level = 0; level < 12; ++level) {
    const int panels = (2 * g.degree() + 16) << level;
    const double h = kTwoPi / panels;
    value = 0.0;
    for (int i = 0; i < panels; ++i) {
      value += detail::gauss_panel([&](double x) { return f(x) * g(x); }, i * h, (i + 1) * h);
    }
    if (std::abs(value - previous) <= tol * std::max(1.0, std::abs(value))) break;
    previous = value;
  }
  return value;
}

}  // namespace psiapprox
