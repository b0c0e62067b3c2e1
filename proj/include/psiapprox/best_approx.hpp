#pragma once

// Best trigonometric approximation by polynomials of degree <= n-1 and the
// deviation of Fourier partial sums.

#include <psiapprox/errors.hpp>
#include <psiapprox/lp_norms.hpp>
#include <psiapprox/math.hpp>
#include <psiapprox/trig_poly.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace psiapprox {

enum class SolverStatus { Converged, MaxIterations };

inline const char* to_string(SolverStatus s) { return s == SolverStatus::Converged ? "converged" : "max_iterations"; }

struct ApproxResult {
  double value = 0.0;
  TrigPoly argmin;
  std::optional<double> certificate;  ///< lower bound on the best approximation
  int iterations = 0;
  SolverStatus status = SolverStatus::Converged;
  int grid = 0;
  double discretization_caveat = 0.0;  ///< (n/grid)², the size of the grid effect
  std::string note;
};

/// Exact L2 projection onto degree <= n-1.
inline ApproxResult best_l2(const TrigPoly& f, int n) {
  if (n < 1) throw DomainError("best_l2: n must be >= 1");
  ApproxResult r;
  r.argmin = partial_sum(f, n);
  r.value = l2_norm(tail_part(f, n));
  r.certificate = r.value;
  return r;
}

/// ‖f - S_{n-1} f‖_p.
inline double fourier_deviation(const TrigPoly& f, int n, double p) {
  if (n < 1) throw DomainError("fourier_deviation: n must be >= 1");
  const TrigPoly tail = tail_part(f, n);
  if (tail.is_zero()) return 0.0;
  return lp_norm(tail, p, 1e-12).value;
}

namespace detail {

/// Column j of the band basis for degree <= n-1: 1/2, cos t, sin t, ..., cos(n-1)t, sin(n-1)t.
inline void band_row(double x, int n, double* row) {
  row[0] = 0.5;
  for (int k = 1; k < n; ++k) {
    row[2 * k - 1] = std::cos(k * x);
    row[2 * k] = std::sin(k * x);
  }
}

inline TrigPoly band_poly(const Eigen::VectorXd& c, int n) {
  std::vector<double> a(static_cast<std::size_t>(n - 1));
  std::vector<double> b(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) {
    a[k - 1] = c[2 * k - 1];
    b[k - 1] = c[2 * k];
  }
  return TrigPoly(c[0], std::move(a), std::move(b));
}

inline Eigen::MatrixXd band_matrix(const std::vector<double>& xs, int n) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(xs.size()), 2 * n - 1);
  std::vector<double> row(static_cast<std::size_t>(2 * n - 1));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    band_row(xs[j], n, row.data());
    for (int c = 0; c < 2 * n - 1; ++c) A(static_cast<Eigen::Index>(j), c) = row[c];
  }
  return A;
}

inline std::vector<double> uniform_grid(int size) {
  std::vector<double> xs(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j) xs[j] = kTwoPi * j / size;
  return xs;
}

/// Discrete minimax on a fixed grid by single-point exchange. Returns
/// std::nullopt when a reference system is singular.
template <class F>
std::optional<ApproxResult> remez_on_grid(F& f, int n, int grid, int max_iterations) {
  const auto xs = uniform_grid(grid);
  const int dim = 2 * n - 1;
  const int refs = 2 * n;
  Eigen::VectorXd fx(grid);
  for (int j = 0; j < grid; ++j) fx[j] = f(xs[j]);
  const Eigen::MatrixXd A = band_matrix(xs, n);

  std::vector<int> ref(static_cast<std::size_t>(refs));
  for (int i = 0; i < refs; ++i) ref[i] = static_cast<int>((static_cast<long long>(i) * grid) / refs);

  ApproxResult out;
  out.grid = grid;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(dim);
  double level = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::MatrixXd M(refs, refs);
    Eigen::VectorXd rhs(refs);
    for (int i = 0; i < refs; ++i) {
      M.row(i).head(dim) = A.row(ref[i]);
      M(i, dim) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs[i] = fx[ref[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd sol = lu.solve(rhs);
    coef = sol.head(dim);
    level = sol[dim];

    const Eigen::VectorXd err = fx - A * coef;
    Eigen::Index jmax = 0;
    const double emax = err.cwiseAbs().maxCoeff(&jmax);
    out.iterations = it;
    if (emax - std::abs(level) <= 1e-12 * std::max(emax, 1e-300) || emax == 0.0) {
      out.status = SolverStatus::Converged;
      break;
    }
    if (it == max_iterations) {
      out.status = SolverStatus::MaxIterations;
      break;
    }

    // Replace the neighbour (circularly) whose error has the same sign.
    const int j = static_cast<int>(jmax);
    const auto pos = std::upper_bound(ref.begin(), ref.end(), j) - ref.begin();
    const int left = static_cast<int>((pos - 1 + refs) % refs);
    const int right = static_cast<int>(pos % refs);
    const bool same_left = (err[ref[left]] > 0.0) == (err[j] > 0.0);
    ref[same_left ? left : right] = j;
    std::sort(ref.begin(), ref.end());
    if (std::adjacent_find(ref.begin(), ref.end()) != ref.end()) return std::nullopt;
  }
  out.argmin = band_poly(coef, n);
  out.certificate = std::abs(level);
  return out;
}

}  // namespace detail

/// min over degree <= n-1 of max |f - t|, discretised on `grid` points
/// (default 32n) by Remez exchange. The certificate is the levelled
/// reference error, which bounds the continuous best approximation from
/// below; value is the continuous sup of the final residual.
template <class F>
ApproxResult best_uniform(F&& f, int n, int grid = 0, int max_iterations = 500) {
  if (n < 1) throw DomainError("best_uniform: n must be >= 1");
  if (grid == 0) grid = 32 * n;
  if (grid < 16 * n) throw DomainError("best_uniform: grid must be >= 16n");
  auto& fn = f;
  for (int attempt = 0; attempt < 3; ++attempt, grid *= 2) {
    auto res = detail::remez_on_grid(fn, n, grid, max_iterations);
    if (!res) continue;
    const TrigPoly t = res->argmin;
    res->value = sup_norm([&](double x) { return fn(x) - t(x); }, 1e-12, 4 * n + grid / 8).value;
    res->discretization_caveat = std::pow(static_cast<double>(n) / grid, 2);
    if (attempt > 0) res->note = "reference degenerated; grid refined to " + std::to_string(grid);
    return *res;
  }
  throw DegenerateActiveSet("best_uniform: singular reference system on every grid");
}

/// min over degree <= n-1 of ‖f - t‖_p by iteratively reweighted least
/// squares on `grid` points (default 32n). p = 1 is run at p = 1.05.
template <class F>
ApproxResult best_lp(F&& f, int n, double p, int grid = 0, double tol = 1e-10, int max_iterations = 1000) {
  if (n < 1) throw DomainError("best_lp: n must be >= 1");
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("best_lp: p must lie in [1, inf)");
  if (grid == 0) grid = 32 * n;
  if (grid < 16 * n) throw DomainError("best_lp: grid must be >= 16n");
  auto& fn = f;
  ApproxResult out;
  out.grid = grid;
  out.discretization_caveat = std::pow(static_cast<double>(n) / grid, 2);
  if (p == 1.0) {
    p = 1.05;
    out.note = "p = 1 approximated by p = 1.05";
  }

  const auto xs = detail::uniform_grid(grid);
  const Eigen::MatrixXd A = detail::band_matrix(xs, n);
  Eigen::VectorXd fx(grid);
  for (int j = 0; j < grid; ++j) fx[j] = fn(xs[j]);

  auto objective = [&](const Eigen::VectorXd& e) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < e.size(); ++j) s += std::pow(std::abs(e[j]), p);
    return std::pow(s * kTwoPi / grid, 1.0 / p);
  };
  auto weighted_solve = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd sw = w.cwiseSqrt();
    return Eigen::VectorXd((sw.asDiagonal() * A).colPivHouseholderQr().solve(sw.cwiseProduct(fx)));
  };

  Eigen::VectorXd coef = weighted_solve(Eigen::VectorXd::Ones(grid));
  Eigen::VectorXd err = fx - A * coef;
  double value = objective(err);
  const double step = p > 2.0 ? 1.0 / (p - 1.0) : 1.0;
  out.status = SolverStatus::MaxIterations;
  if (p == 2.0 || value == 0.0) {
    out.status = SolverStatus::Converged;
  } else {
    for (int it = 1; it <= max_iterations; ++it) {
      Eigen::VectorXd w(grid);
      for (int j = 0; j < grid; ++j) w[j] = std::pow(std::max(std::abs(err[j]), 1e-10), p - 2.0);
      const Eigen::VectorXd next = weighted_solve(w);
      coef += step * (next - coef);
      err = fx - A * coef;
      const double v = objective(err);
      out.iterations = it;
      const bool done = std::abs(value - v) <= tol * std::max(v, 1e-300);
      value = v;
      if (done) {
        out.status = SolverStatus::Converged;
        break;
      }
    }
  }

  out.argmin = detail::band_poly(coef, n);
  const TrigPoly t = out.argmin;
  QuadratureOptions opts;
  opts.initial_panels = std::max(64, grid / 4);
  out.value = lp_norm([&](double x) { return fn(x) - t(x); }, p, 1e-10, opts).value;
  return out;
}

/// Points of the grid where |r| >= (1 - rel_tol) max|r|, merged into
/// alternating runs; returns the length of the longest circular alternation.
template <class F>
int alternation_count(F&& residual, double level, int grid, double rel_tol = 1e-3) {
  std::vector<int> signs;
  int last = 0;
  for (int j = 0; j < grid; ++j) {
    const double v = residual(kTwoPi * j / grid);
    if (std::abs(v) < (1.0 - rel_tol) * level) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (s != last) signs.push_back(s);
    last = s;
  }
  if (signs.size() > 1 && signs.front() == signs.back()) signs.pop_back();
  return static_cast<int>(signs.size());
}

}  // namespace psiapprox
