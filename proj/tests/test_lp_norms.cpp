#include <catch_amalgamated.hpp>

#include <psiapprox/kernels.hpp>
#include <psiapprox/lp_norms.hpp>

#include "oracles.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <random>

using namespace psiapprox;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TrigPoly random_poly(std::mt19937_64& rng, int m) {
  return TrigPoly(oracle::gaussian_vector(rng, 1)[0], oracle::gaussian_vector(rng, m), oracle::gaussian_vector(rng, m));
}

}  // namespace

TEST_CASE("lp_norm examples") {
  auto c = [](double t) { return std::cos(t); };
  CHECK_THAT(lp_norm(c, 2.0, 1e-12).value, WithinAbs(std::sqrt(kPi), 1e-10));
  CHECK_THAT(lp_norm(c, 1.0, 1e-10).value, WithinAbs(4.0, 1e-8));
}

TEST_CASE("lp_norm of an integrable singularity with grading") {
  // ∫_0^{2π} |sin(t/2)|^{-1/2} dt = 2 ∫_0^π sin^{-1/2}(u) du = 2 B(1/4, 1/2)
  auto f = [](double t) { return std::pow(std::abs(std::sin(t / 2)), -0.5); };
  QuadratureOptions opts;
  opts.graded_at = {0.0};
  const auto r = lp_norm(f, 1.0, 1e-10, opts);
  const double exact = 2.0 * boost::math::beta(0.25, 0.5);
  CHECK(r.converged);
  CHECK_THAT(r.value, WithinRel(exact, 1e-6));
}

TEST_CASE("lp_norm flags a non-integrable singularity") {
  auto f = [](double t) { return 1.0 / std::abs(std::sin(t / 2)); };
  QuadratureOptions opts;
  opts.graded_at = {0.0};
  const auto r = lp_norm(f, 1.0, 1e-8, opts);
  CHECK(std::isinf(r.value));
  CHECK_FALSE(r.converged);
}

TEST_CASE("lp_norm reports non-convergence with its best value") {
  auto f = [](double t) { return std::cos(200 * t) + std::sin(3 * t); };
  QuadratureOptions opts;
  opts.initial_panels = 4;
  opts.max_levels = 1;
  const auto r = lp_norm(f, 3.0, 1e-14, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.mesh_level == 1);
  CHECK(r.error_estimate > 0.0);
}

TEST_CASE("lp_norm validates arguments") {
  auto f = [](double t) { return std::cos(t); };
  CHECK_THROWS_AS(lp_norm(f, 0.5), DomainError);
  CHECK_THROWS_AS(lp_norm(f, 2.0, 0.0), DomainError);
}

TEST_CASE("sup_norm examples") {
  CHECK_THAT(sup_norm([](double t) { return std::cos(7 * t); }, 1e-10, 7).value, WithinAbs(1.0, 1e-9));
  CHECK_THAT(sup_norm([](double t) { return dirichlet(5, t); }, 1e-10, 5).value, WithinAbs(5.5, 1e-12));
  const TrigPoly g = vp_difference(1);
  const double grid = oracle::grid_max([&](double t) { return g(t); }, 1'000'000);
  CHECK_THAT(lp_norm(g, kInf).value, WithinAbs(grid, 1e-8));
  CHECK(lp_norm(g, kInf).value >= grid - 1e-15);
}

TEST_CASE("dual_pairing examples") {
  for (int k : {1, 3, 10}) {
    CHECK_THAT(dual_pairing(TrigPoly::cosine(k), TrigPoly::cosine(k)), WithinRel(kPi, 1e-15));
    CHECK(dual_pairing(TrigPoly::cosine(k), TrigPoly::sine(k)) == 0.0);
    auto c = [k](double t) { return std::cos(k * t); };
    CHECK_THAT(dual_pairing(c, TrigPoly::cosine(k)), WithinRel(kPi, 1e-12));
    CHECK_THAT(dual_pairing(c, TrigPoly::sine(k)), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("Hoelder inequality for random polynomial pairs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const TrigPoly f = random_poly(rng, 6);
    const TrigPoly g = random_poly(rng, 9);
    const double pairing = std::abs(dual_pairing(f, g));
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
      const double bound = lp_norm(f, p).value * lp_norm(g, conjugate_exponent(p)).value;
      CHECK(pairing <= bound * (1 + 1e-9));
    }
  }
}

TEST_CASE("normalised norms are nondecreasing in p") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const TrigPoly f = random_poly(rng, 5);
    double prev = 0.0;
    for (double p : {1.0, 2.0, 4.0}) {
      const double v = lp_norm(f, p).value / std::pow(kTwoPi, 1.0 / p);
      CHECK(v >= prev * (1 - 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("quadrature agrees with Parseval and with a fine midpoint rule") {
  std::mt19937_64 rng(29);
  for (int m : {1, 7, 30}) {
    const TrigPoly f = random_poly(rng, m);
    const auto callable = [&](double t) { return f(t); };
    CHECK_THAT(lp_norm(callable, 2.0, 1e-12).value, WithinRel(l2_norm(f), 1e-9));
    for (double p : {1.0, 1.5, 3.0}) {
      CHECK_THAT(lp_norm(f, p).value, WithinRel(oracle::midpoint_norm(callable, p, 200000), 1e-8));
    }
  }
}
