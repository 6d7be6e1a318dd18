#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "rabi/errors.hpp"
#include "rabi/heun.hpp"

using namespace rabi;

namespace {

const RabiParams kBiased{1.0, 0.2, 0.8, 0.1};

// Direct, unscaled recurrence used as an independent reference.
std::vector<double> naive_coefficients(const HeunParams& hp, int n_max) {
  std::vector<double> h{1.0};
  double prev2 = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double a = hp.alpha, b = hp.beta, c = hp.gamma;
    const double an = (n + b) * n;
    const double bn = n * n + (b + c - a - 1) * n + hp.eta - b / 2 + (c - a) * (b - 1) / 2;
    const double cn = hp.delta + a * (b + c) / 2 + a * (n - 1);
    const double next = (bn * h.back() + cn * prev2) / an;
    prev2 = h.back();
    h.push_back(next);
  }
  return h;
}

// Left side of the confluent Heun equation times x (x - 1).
double heun_residual(const HeunParams& hp, double x, const HeunEval& v) {
  const double xx = x * (x - 1);
  return xx * v.second_derivative +
         (hp.alpha * xx + (hp.beta + 1) * (x - 1) + (hp.gamma + 1) * x) * v.derivative +
         (hp.mu() * x + hp.nu()) * v.value;
}

}  // namespace

TEST_SUITE("heun") {
  TEST_CASE("zero parameters truncate at degree zero") {
    const auto s = build_series(HeunParams{});
    CHECK(s.status() == SeriesStatus::TruncatedPolynomial);
    CHECK(s.truncation_degree() == 0);
    for (double x : {-3.0, 0.0, 0.4, 2.0}) CHECK(evaluate(s, x).value == 1.0);
  }

  TEST_CASE("reference second family truncates at degrees zero and one") {
    const Energy e{0.86};
    const auto plus = build_series(swap_family(heun_params_plus(e, kBiased)));
    const auto minus = build_series(swap_family(heun_params_minus(e, kBiased)));
    CHECK(plus.status() == SeriesStatus::TruncatedPolynomial);
    CHECK(plus.truncation_degree() == 0);
    CHECK(minus.status() == SeriesStatus::TruncatedPolynomial);
    CHECK(minus.truncation_degree() == 1);
  }

  TEST_CASE("reference first family diverges at the pole index") {
    const auto s = build_series(heun_params_plus(Energy{0.86}, kBiased));
    CHECK(s.status() == SeriesStatus::DivergentBeta);
    CHECK(s.divergence_index() == 2);
    CHECK_THROWS_AS(evaluate(s, 0.5), DivergentSolution);
  }

  TEST_CASE("value at the origin is one and the slope is the first coefficient") {
    const auto s = build_series(heun_params_plus(Energy{0.3}, kBiased));
    const auto v = evaluate(s, 0.0);
    CHECK(v.value == 1.0);
    CHECK(v.derivative == doctest::Approx(s.coefficient(1)).epsilon(1e-15));
  }

  TEST_CASE("degree-one polynomial on the plus N = 1 locus") {
    const double g = 0.3, eps = 0.1;
    const RabiParams p{1.0, g, std::sqrt(1 + 2 * eps - 4 * g * g), eps};
    const auto s = build_series(heun_params_plus(Energy{1 - g * g + eps}, p));
    REQUIRE(s.status() == SeriesStatus::TruncatedPolynomial);
    CHECK(s.truncation_degree() == 1);
    CHECK(s.coefficient(1) == doctest::Approx(-4 * g * g / (1 + 2 * eps)).epsilon(1e-12));
    for (double z : {-0.2, 0.0, 0.1}) {
      const double x = (g - z) / (2 * g);
      const double expect = 1 - 2 * g * g / (1 + 2 * eps) + 2 * g * z / (1 + 2 * eps);
      CHECK(evaluate(s, x).value == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("coefficients match the plain recurrence") {
    const auto hp = heun_params_plus(Energy{0.37}, kBiased);
    const auto s = build_series(hp, 60);
    const auto ref = naive_coefficients(hp, 60);
    for (std::size_t n = 0; n < s.stored_terms(); ++n) {
      CHECK(s.coefficient(n) == doctest::Approx(ref[n]).epsilon(1e-12));
    }
  }

  TEST_CASE("partial sums agree between half and full term budgets") {
    const auto hp = heun_params_minus(Energy{-0.41}, kBiased);
    const auto full = evaluate(build_series(hp, 500), 0.5);
    const auto half = evaluate(build_series(hp, 250), 0.5);
    REQUIRE(full.status == SeriesStatus::Converged);
    CHECK(half.value == doctest::Approx(full.value).epsilon(1e-10));
    CHECK(half.derivative == doctest::Approx(full.derivative).epsilon(1e-10));
  }

  TEST_CASE("series solves the differential equation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> e(-1.5, 3.0), x(-0.6, 0.6);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
      const auto hp = heun_params_plus(Energy{e(rng)}, kBiased);
      const auto s = build_series(hp);
      if (s.status() != SeriesStatus::Converged) continue;
      const double xv = x(rng);
      const auto v = evaluate(s, xv);
      if (v.status != SeriesStatus::Converged) continue;
      const double scale = std::abs(v.value) + std::abs(v.derivative) + std::abs(v.second_derivative);
      CHECK(std::abs(heun_residual(hp, xv, v)) <= 1e-9 * std::max(1.0, scale));
      ++checked;
    }
    CHECK(checked > 30);
  }

  TEST_CASE("derivative agrees with a central difference") {
    const auto s = build_series(heun_params_minus(Energy{0.2}, kBiased));
    const double h = 1e-6, x = 0.3;
    const double fd = (evaluate(s, x + h).value - evaluate(s, x - h).value) / (2 * h);
    CHECK(evaluate(s, x).derivative == doctest::Approx(fd).epsilon(1e-7));
  }

  TEST_CASE("removable pole at an isolated degeneracy keeps a polynomial") {
    // Plus N = 1 locus at zero bias: 0.8^2 + 4 * 0.3^2 = 1.
    const RabiParams p{1.0, 0.3, 0.8, 0.0};
    const auto s = build_series(heun_params_plus(Energy{0.91}, p));
    CHECK(s.status() == SeriesStatus::TruncatedPolynomial);
    CHECK(s.truncation_degree() == 1);
  }

  TEST_CASE("large energies stay finite") {
    const RabiParams p{1.0, 1.5, 0.8, 0.1};
    const auto s = build_series(heun_params_plus(Energy{25.3}, p), 2000);
    CHECK(s.status() != SeriesStatus::DivergentBeta);
    for (std::size_t n = 0; n < s.stored_terms(); ++n) CHECK(std::isfinite(s.mantissa(n)));
    if (s.status() == SeriesStatus::Converged) CHECK(std::isfinite(evaluate(s, 0.5).value));
  }

  TEST_CASE("truncation check on a hand-built degree-zero case") {
    // alpha = delta = 0 makes C vanish; eta = -1/2 makes B(1) vanish.
    const HeunParams hp{0.0, 1.0, 0.0, 0.0, -0.5};
    CHECK(recurrence_terms(hp, 1).b == doctest::Approx(0.0));
    CHECK(truncation_check(hp, 0));
  }

  TEST_CASE("truncation check at and away from the reference point") {
    CHECK(truncation_check(swap_family(heun_params_plus(Energy{0.86}, kBiased)), 0));
    CHECK_FALSE(truncation_check(swap_family(heun_params_plus(Energy{0.90}, kBiased)), 0));
  }

  TEST_CASE("terminating coefficients stay zero past the degree") {
    const auto hp = swap_family(heun_params_minus(Energy{0.86}, kBiased));
    const auto h = naive_coefficients(hp, 12);
    for (int n = 2; n <= 12; ++n) CHECK(std::abs(h[n]) <= 1e-12);
  }

  TEST_CASE("argument and domain errors") {
    CHECK_THROWS_AS(build_series(HeunParams{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_series(HeunParams{}, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(truncation_check(HeunParams{}, -1), std::invalid_argument);
    const auto s = build_series(heun_params_plus(Energy{0.3}, kBiased));
    REQUIRE(s.status() == SeriesStatus::Converged);
    CHECK_THROWS_AS(evaluate(s, 1.0), DomainError);
    CHECK_THROWS_AS(evaluate(s, -1.2), DomainError);
  }
}
