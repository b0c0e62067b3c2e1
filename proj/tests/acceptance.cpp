// One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#include <psiapprox/psiapprox.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace psiapprox;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s criterion %d (%s): %s [%.2fs]\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

/// Runs one criterion; a positive limit (seconds) is part of the criterion.
template <class F>
void criterion(int id, const std::string& name, double limit, F&& body) {
  const auto start = Clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit > 0.0 && seconds >= limit) {
    ok = false;
    detail += fmt(" (over the %gs limit)", limit);
  }
  report(id, name, ok, detail, seconds);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

std::vector<int> sweep() {
  std::vector<int> ns;
  for (int n = 4; n <= 128; n += 4) ns.push_back(n);
  return ns;
}

/// Sandwich, ratio band and drift checks for one class.
bool sandwich(const ClassSpec& spec, std::string& detail) {
  const auto table = order_table(spec, sweep());
  if (!table.failures.empty()) {
    detail += "n=" + std::to_string(table.failures[0].n) + " failed: " + table.failures[0].message + "; ";
    return false;
  }
  bool ok = true;
  std::vector<double> upper;
  std::vector<double> lower;
  for (const auto& r : table.records) {
    ok = ok && r.lower <= r.upper;
    upper.push_back(r.upper_ratio);
    lower.push_back(r.lower_ratio);
  }
  const double us = table.band.upper_spread();
  const double ls = table.band.lower_spread();
  ok = ok && us <= 10.0 && ls <= 10.0 && no_monotone_drift(upper) && no_monotone_drift(lower);
  detail += fmt("beta=%g upper band [%.4g, %.4g]", spec.beta, table.band.upper_min, table.band.upper_max) +
            fmt(" lower band [%.4g, %.4g]; ", table.band.lower_min, table.band.lower_max);
  return ok;
}

TrigPoly random_poly(std::mt19937_64& rng, int m, bool zero_mean) {
  const double a0 = zero_mean ? 0.0 : oracle::gaussian_vector(rng, 1)[0];
  return TrigPoly(a0, oracle::gaussian_vector(rng, m), oracle::gaussian_vector(rng, m));
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();

  criterion(1, "Parseval identity for V_2n - V_n", 1.0, [](std::string& detail) {
    double worst = 0.0;
    for (int n : {1, 2, 4, 8, 16, 32, 64}) {
      const TrigPoly g = vp_difference(n);
      const double exact = kPi * (n + 1.0 / (4.0 * n));
      worst = std::max(worst, std::abs(std::pow(l2_norm(g), 2) - exact) / exact);
      // independent: coefficients sampled from the function itself
      long double s = 0.0L;
      for (int k = 1; k <= 4 * n; ++k) {
        const auto [a, b] = oracle::coefficient([&](double t) { return g(t); }, k, 8 * n + 8);
        s += static_cast<long double>(a) * a + static_cast<long double>(b) * b;
      }
      worst = std::max(worst, std::abs(static_cast<double>(oracle::kPi * s) - exact) / exact);
    }
    detail = fmt("max relative error %.3g", worst);
    return worst <= 1e-10;
  });

  criterion(2, "kernel identities", 10.0, [](std::string& detail) {
    // Reference values by plain summation, one pass per t: S_k = 1/2 + Σ_{j<=k} cos jt,
    // V_m = mean of S_m .. S_{2m-1} from prefix sums of S.
    double vp = 0.0;
    std::vector<long double> prefix(257);
    for (int j = 0; j < 1000; ++j) {
      const double t = -kPi + kTwoPi * (j + 0.5) / 1000;
      long double partial = 0.5L;
      prefix[0] = 0.0L;
      for (int k = 0; k <= 255; ++k) {
        if (k > 0) partial += std::cos(static_cast<long double>(k) * t);
        prefix[k + 1] = prefix[k] + partial;
      }
      for (int m = 1; m <= 128; ++m) {
        const double def = static_cast<double>((prefix[2 * m] - prefix[m]) / m);
        vp = std::max(vp, std::abs(vallee_poussin(m, t, VpRoute::Fejer) - def));
        vp = std::max(vp, std::abs(vallee_poussin(m, t, VpRoute::Expansion) - def));
      }
    }
    double dk = 0.0;
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const long double shift = oracle::kPi * beta / 2;
      for (int j = 0; j < 1000; ++j) {
        const double t = -kPi + kTwoPi * (j + 0.5) / 1000;
        long double d = std::cos(shift) / 2;
        for (int k = 0; k <= 128; ++k) {
          if (k > 0) d += std::cos(static_cast<long double>(k) * t - shift);
          dk = std::max(dk, std::abs(dirichlet_beta(k, beta, t) - static_cast<double>(d)));
        }
      }
    }
    detail = fmt("V_m routes %.3g, D_{k,beta} %.3g", vp, dk);
    return vp <= 1e-9 && dk <= 1e-9;
  });

  criterion(3, "orthogonality of V_2n - V_n", 0.0, [](std::string& detail) {
    double worst = 0.0;
    for (int n = 1; n <= 64; ++n) {
      const TrigPoly g = vp_difference(n);
      for (int k = 0; k <= n; ++k) {
        const auto [a, b] = oracle::coefficient([&](double t) { return g(t); }, k, 8 * n + 8);
        worst = std::max({worst, std::abs(a), std::abs(b), std::abs(g.a(k)), std::abs(g.b(k))});
      }
    }
    detail = fmt("max low-harmonic coefficient %.3g", worst);
    return worst <= 1e-12;
  });

  criterion(4, "calculus round trip and Weyl-Nagy", 0.0, [](std::string& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> degree(1, 64);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double round = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const TrigPoly f = random_poly(rng, degree(rng), true);
      const PsiSpec psi = trial % 2 ? PsiSpec::power(0.5 + 2 * unit(rng)) : PsiSpec::power_log_damped(1, 1, 1);
      const double beta = 4 * unit(rng);
      const TrigPoly back = derivative(integral(f, psi, beta), psi, beta);
      for (int k = 1; k <= f.degree(); ++k) {
        round = std::max({round, std::abs(back.a(k) - f.a(k)), std::abs(back.b(k) - f.b(k))});
      }
    }
    double classical = 0.0;
    const TrigPoly f = random_poly(rng, 32, true);
    for (int r : {1, 2}) {
      const TrigPoly d = derivative(f, PsiSpec::power(r), r);
      for (int k = 1; k <= 32; ++k) {
        // r-th derivative of a cos kt + b sin kt
        const double ca = r == 1 ? k * f.b(k) : -double(k) * k * f.a(k);
        const double cb = r == 1 ? -k * f.a(k) : -double(k) * k * f.b(k);
        classical = std::max({classical, std::abs(d.a(k) - ca) / (k * k), std::abs(d.b(k) - cb) / (k * k)});
      }
    }
    detail = fmt("round trip %.3g, classical %.3g", round, classical);
    return round <= 1e-10 && classical <= 1e-14;
  });

  criterion(5, "Lemma 1", 0.0, [](std::string& detail) {
    std::vector<int> ns;
    for (int n = 2; n <= 512; ++n) ns.push_back(n);
    bool ok = true;
    for (const auto& psi : {PsiSpec::power(1), PsiSpec::power(2), PsiSpec::power_log_damped(1, 1, 1)}) {
      const auto rep = lemma1_verify(psi, 0.5, ns);
      double min_ratio = kInf;
      for (const auto& row : rep.rows) min_ratio = std::min(min_ratio, row.ratio);
      ok = ok && rep.min_slack >= -1e-12 && min_ratio >= 1.0 && rep.max_ratio <= 10.0;
      detail += psi.name() + fmt(" ratio [%.4g, %.4g]; ", min_ratio, rep.max_ratio);
    }
    const auto geo = lemma1_verify(PsiSpec::geometric(0.5), 1.0, ns);
    double err = 0.0;
    for (const auto& row : geo.rows) err = std::max(err, std::abs(row.sum - std::ldexp(row.n + 1.0, -row.n)));
    detail += fmt("geometric closed form %.3g", err);
    return ok && err <= 1e-12;
  });

  criterion(6, "Theorem 1 sandwich", 120.0, [](std::string& detail) {
    bool ok = true;
    for (double beta : {0.0, 1.0}) ok = sandwich({PsiSpec::power(1.5), beta, 2.0, ClassKind::C_class}, detail) && ok;
    return ok;
  });

  criterion(7, "Theorem 2 sandwich", 120.0, [](std::string& detail) {
    const auto cond = check_class_conditions(PsiSpec::power(1.5), 1.0);
    bool ok = cond.delta2_sign == Delta2Sign::Convex;
    detail = std::string("delta2 ") + to_string(cond.delta2_sign) + "; ";
    for (double beta : {0.0, 1.0}) ok = sandwich({PsiSpec::power(1.5), beta, 1.0, ClassKind::C_class}, detail) && ok;
    return ok;
  });

  criterion(8, "Theorem 3 sandwich", 120.0, [](std::string& detail) {
    return sandwich({PsiSpec::power(1.5), 0.0, 2.0, ClassKind::L1_class}, detail);
  });

  criterion(9, "Weyl-Nagy slopes", 0.0, [](std::string& detail) {
    bool ok = true;
    std::vector<int> ns;
    for (int n = 4; n <= 128; n *= 2) ns.push_back(n);
    for (auto [r, p] : {std::pair{1.5, 2.0}, {2.0, 2.0}, {1.5, 4.0}}) {
      std::vector<double> x;
      std::vector<double> y;
      const ClassSpec spec{PsiSpec::power(r), r, p, ClassKind::C_class};
      for (int n : ns) {
        x.push_back(n);
        y.push_back(upper_bound(spec, n));
      }
      const double slope = loglog_slope(x, y);
      const double expected = -r + 1.0 / p;
      ok = ok && std::abs(slope - expected) <= 0.05;
      detail += fmt("(r=%g,p=%g) slope %.4f; ", r, p, slope);
    }
    return ok;
  });

  criterion(10, "best approximation solvers", 0.0, [](std::string& detail) {
    std::mt19937_64 rng(10);
    double l2 = 0.0;
    bool dominated = true;
    std::vector<TrigPoly> corpus;
    for (int trial = 0; trial < 20; ++trial) {
      const TrigPoly f = random_poly(rng, 16, false);
      corpus.push_back(f);
      const int n = 1 + trial % 12;
      long double tail = 0.0L;
      for (int k = n; k <= 16; ++k) tail += static_cast<long double>(f.a(k)) * f.a(k) + f.b(k) * f.b(k);
      const double exact = std::sqrt(static_cast<double>(oracle::kPi * tail));
      l2 = std::max(l2, std::abs(best_l2(f, n).value - exact) / exact);
      dominated = dominated && fourier_deviation(f, n, 2.0) >= best_l2(f, n).value * (1 - 1e-12);
    }
    double cos_err = 0.0;
    double cert_gap = 0.0;
    for (int n : {2, 4, 8}) {
      const auto r = best_uniform([n](double t) { return std::cos(n * t); }, n);
      cos_err = std::max(cos_err, std::abs(r.value - 1.0));
      cert_gap = std::max(cert_gap, r.certificate ? std::abs(*r.certificate - r.value) : kInf);
      dominated = dominated && fourier_deviation(TrigPoly::cosine(n), n, kInf) >= r.value - 1e-9;
    }
    for (std::size_t i = 0; i < 6; ++i) {
      const TrigPoly& f = corpus[i];
      const auto fn = [&](double t) { return f(t); };
      const auto u = best_uniform(fn, 5);
      dominated = dominated && fourier_deviation(f, 5, kInf) >= u.value - 1e-9;
      const auto l = best_lp(fn, 5, 3.0);
      dominated = dominated && fourier_deviation(f, 5, 3.0) >= l.value * (1 - 1e-8);
    }
    detail = fmt("L2 rel %.3g, cos nt %.3g, certificate gap %.3g", l2, cos_err, cert_gap) +
             (dominated ? "" : ", fourier deviation below best");
    return l2 <= 1e-8 && cos_err <= 1e-4 && cert_gap <= 1e-4 && dominated;
  });

  criterion(11, "Bernstein boundedness", 0.0, [](std::string& detail) {
    const PsiSpec psi = PsiSpec::power(1.5);
    std::mt19937_64 rng(11);
    bool ok = true;
    for (double beta : {0.0, 1.0}) {
      std::vector<double> ratios;
      std::vector<double> early;
      std::vector<double> late;
      for (int m = 4; m <= 128; m *= 2) {
        std::vector<TrigPoly> family = {dirichlet_poly(m), fejer_poly(m), vallee_poussin_poly(m / 2)};
        for (int i = 0; i < 10; ++i) family.push_back(random_poly(rng, m, true));
        for (const auto& f : family) {
          const double v = bernstein_ratio(f, psi, beta, 2.0);
          ratios.push_back(v);
          (m <= 16 ? early : late).push_back(v);
        }
      }
      const double med = median(ratios);
      const double top = *std::max_element(ratios.begin(), ratios.end());
      const double late_max = *std::max_element(late.begin(), late.end());
      const double early_max = *std::max_element(early.begin(), early.end());
      ok = ok && top <= 3.0 * med && late_max <= 2.0 * early_max;
      detail += fmt("beta=%g max/median %.3f; ", beta, top / med);
    }
    return ok;
  });

  const double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
  report(12, "runtime", total < 600.0, fmt("acceptance suite %.1fs, one process, one worker", total), total);
  return failures == 0 ? 0 : 1;
}
