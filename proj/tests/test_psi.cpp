#include <catch_amalgamated.hpp>

#include <psiapprox/psi.hpp>

#include <cmath>

using namespace psiapprox;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("psi_eval closed forms") {
  CHECK_THAT(psi_eval(PsiSpec::power(2), 4.0), WithinRel(0.0625, 1e-15));
  CHECK_THAT(psi_eval(PsiSpec::power_log_damped(1, 1, std::exp(1.0) - 1.0), 1.0), WithinRel(1.0, 1e-15));
  CHECK_THAT(psi_eval(PsiSpec::geometric(0.5), 3.0), WithinRel(0.125, 1e-15));
  CHECK_THAT(psi_eval(PsiSpec::power_log_grown(1, 1, 3), 2.0), WithinRel(0.5 * std::log(5.0), 1e-15));
}

TEST_CASE("psi_eval rejects t < 1") {
  CHECK_THROWS_AS(psi_eval(PsiSpec::power(1), 0.5), DomainError);
  CHECK_THROWS_AS(psi_delta(PsiSpec::power(1), 0), DomainError);
}

TEST_CASE("family admissibility") {
  CHECK_THROWS_AS(PsiSpec::power(0.0), DomainError);
  CHECK_THROWS_AS(PsiSpec::geometric(1.0), DomainError);
  // c must exceed e^{α/r} - 1 = e - 1
  CHECK_THROWS_AS(PsiSpec::power_log_grown(1, 1, 1.5), DomainError);
  CHECK_NOTHROW(PsiSpec::power_log_grown(1, 1, 1.8));
  CHECK_THROWS_AS(PsiSpec::tabulated({1.0, 2.0}), DomainError);
}

TEST_CASE("tabulated family interpolates and continues with a power tail") {
  const auto psi = PsiSpec::tabulated({1.0, 0.5, 0.25}, 2.0);
  CHECK(psi(2.0) == 0.5);
  CHECK_THAT(psi(2.5), WithinRel(0.375, 1e-15));
  CHECK_THAT(psi(6.0), WithinRel(0.25 * 0.25, 1e-15));
  CHECK(psi.summable());
}

TEST_CASE("psi_delta examples") {
  CHECK_THAT(psi_delta(PsiSpec::geometric(0.5), 2), WithinRel(0.125, 1e-14));
  CHECK_THAT(psi_delta(PsiSpec::power(1), 1), WithinRel(0.5, 1e-14));
  CHECK_THAT(psi_delta(PsiSpec::power(2), 3), WithinRel(1.0 / 9 - 1.0 / 16, 1e-14));
}

TEST_CASE("delta2_reciprocal examples") {
  for (long long k : {1LL, 7LL, 100LL, 5000LL}) CHECK_THAT(delta2_reciprocal(PsiSpec::power(1), k), WithinAbs(0.0, 1e-9));
  CHECK_THAT(delta2_reciprocal(PsiSpec::power(2), 1), WithinRel(2.0, 1e-13));
  CHECK_THAT(delta2_reciprocal(PsiSpec::geometric(0.5), 1), WithinRel(2.0, 1e-13));
}

TEST_CASE("psi_delta is nonnegative and telescopes") {
  const std::vector<PsiSpec> specs = {PsiSpec::power(0.5),           PsiSpec::power(2),
                                      PsiSpec::power_log_damped(1, 1, 1), PsiSpec::power_log_grown(1, 1, 2),
                                      PsiSpec::geometric(0.9),        PsiSpec::tabulated({1, 0.9, 0.5, 0.4}, 1.5)};
  for (const auto& psi : specs) {
    for (long long n : {1LL, 3LL, 50LL}) {
      long double sum = 0.0L;
      for (long long k = n; k <= 10000; ++k) {
        const double d = psi_delta(psi, k);
        REQUIRE(d >= 0.0);
        sum += d;
      }
      const double expected = psi(static_cast<double>(n)) - psi(10001.0);
      CHECK_THAT(static_cast<double>(sum), WithinAbs(expected, 1e-12));
    }
  }
}

TEST_CASE("delta2 sign of power families follows convexity of k^r") {
  for (double r : {1.0, 1.5, 2.0, 3.0}) {
    for (long long k = 1; k <= 1000; ++k) CHECK(delta2_reciprocal_scaled(PsiSpec::power(r), k) >= -1e-12);
  }
  bool negative = false;
  for (long long k = 1; k <= 1000; ++k) negative = negative || delta2_reciprocal(PsiSpec::power(0.5), k) < 0.0;
  CHECK(negative);
}

TEST_CASE("check_class_conditions examples") {
  SECTION("Power(2), p = 1") {
    const auto rep = check_class_conditions(PsiSpec::power(2), 1.0, 10000, 1e-12);
    CHECK(rep.in_b);
    REQUIRE(rep.theta_p_alpha.has_value());
    CHECK(*rep.theta_p_alpha > 1.0);
    CHECK(*rep.theta_p_alpha < 2.0 + 1e-9);
    CHECK(rep.delta2_sign == Delta2Sign::Convex);
    CHECK(rep.theta_status == ThetaStatus::Found);
  }
  SECTION("Power(0.5), p = 1") {
    const auto rep = check_class_conditions(PsiSpec::power(0.5), 1.0, 10000, 1e-12);
    CHECK_FALSE(rep.theta_p_alpha.has_value());
    CHECK(rep.theta_status == ThetaStatus::InconclusiveAtHorizon);
    CHECK(rep.delta2_sign == Delta2Sign::Concave);
  }
  SECTION("Geometric(0.5), p = 2") {
    const auto rep = check_class_conditions(PsiSpec::geometric(0.5), 2.0, 10000, 1e-12);
    CHECK_FALSE(rep.in_b);
  }
  SECTION("Power(1) is linear in 1/psi and counts as convex") {
    CHECK(check_class_conditions(PsiSpec::power(1), 2.0).delta2_sign == Delta2Sign::Convex);
  }
}

TEST_CASE("nerb2 bound for power weights stays near 1/r") {
  // ψ(n) Σ_{k<n} k^{r-1} ≈ 1/r for ψ = k^{-r}
  const auto rep = check_class_conditions(PsiSpec::power(1.5), 2.0, 2000);
  CHECK(rep.nerb2_sum_bound < 1.0);
  CHECK(rep.nerb2_sum_bound > 0.5);
}

TEST_CASE("check_class_conditions validates arguments and is deterministic") {
  CHECK_THROWS_AS(check_class_conditions(PsiSpec::power(2), 1.0, 8), DomainError);
  CHECK_THROWS_AS(check_class_conditions(PsiSpec::power(2), 0.5), DomainError);
  const auto a = check_class_conditions(PsiSpec::power_log_damped(1, 1, 1), 1.5, 5000);
  const auto b = check_class_conditions(PsiSpec::power_log_damped(1, 1, 1), 1.5, 5000);
  CHECK(a.theta_p_alpha == b.theta_p_alpha);
  CHECK(a.b_ratio_sup == b.b_ratio_sup);
  CHECK(a.nerb2_sum_bound == b.nerb2_sum_bound);
  CHECK(a.delta2_sign == b.delta2_sign);
}
