#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "rabi/model.hpp"

using namespace rabi;

namespace {

constexpr double kTight = 1e-12;

RabiParams params(double g, double delta, double eps) { return {1.0, g, delta, eps}; }

void check_set(const HeunParams& hp, double a, double b, double c, double d, double e) {
  CHECK(hp.alpha == doctest::Approx(a).epsilon(kTight));
  CHECK(hp.beta == doctest::Approx(b).epsilon(kTight));
  CHECK(hp.gamma == doctest::Approx(c).epsilon(kTight));
  CHECK(hp.delta == doctest::Approx(d).epsilon(kTight));
  CHECK(hp.eta == doctest::Approx(e).epsilon(kTight));
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("plus set vanishes except beta and eta at the origin") {
    check_set(heun_params_plus(Energy{0.0}, params(0, 0, 0)), 0.0, -1.0, 0.0, 0.0, 0.5);
  }

  TEST_CASE("minus set vanishes except gamma and eta at the origin") {
    check_set(heun_params_minus(Energy{0.0}, params(0, 0, 0)), 0.0, 0.0, -1.0, 0.0, 0.5);
  }

  TEST_CASE("plus set at a hand-evaluated point") {
    // E = 1, g = 1/2, delta = 1, epsilon = 0 worked out by hand.
    check_set(heun_params_plus(Energy{1.0}, params(0.5, 1.0, 0.0)), 1.0, -2.25, -1.25, -0.5,
              0.28125);
  }

  TEST_CASE("minus set at a hand-evaluated point") {
    // E = 1, g = 1/2, delta = 1, epsilon = 1/4 worked out by hand.
    check_set(heun_params_minus(Energy{1.0}, params(0.5, 1.0, 0.25)), 1.0, -1.5, -2.0, 0.75,
              -0.5);
  }

  TEST_CASE("beta at the reference exceptional point is an integer") {
    const auto p = params(0.2, 0.8, 0.1);
    CHECK(heun_params_plus(Energy{0.86}, p).beta == doctest::Approx(-2.0).epsilon(kTight));
    CHECK(heun_params_minus(Energy{0.86}, p).beta == doctest::Approx(-1.0).epsilon(kTight));
  }

  TEST_CASE("family swap exchanges beta and gamma and is an involution") {
    const HeunParams hp{1, 2, 3, 4, 5};
    const HeunParams s = swap_family(hp);
    CHECK(s == HeunParams{1, 3, 2, -4, 9});
    CHECK(swap_family(s) == hp);
  }

  TEST_CASE("sets share alpha and their beta, gamma differ by one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> e(-5, 5), g(0, 3), d(0, 3), eps(-2, 2);
    for (int i = 0; i < 500; ++i) {
      const auto p = params(g(rng), d(rng), eps(rng));
      const Energy en{e(rng)};
      const auto a = heun_params_plus(en, p);
      const auto b = heun_params_minus(en, p);
      CHECK(a.alpha == doctest::Approx(4 * p.g * p.g).epsilon(kTight));
      CHECK(b.alpha == a.alpha);
      CHECK(a.beta - b.beta == doctest::Approx(-1.0).epsilon(kTight));
      CHECK(a.gamma - b.gamma == doctest::Approx(1.0).epsilon(kTight));
    }
  }

  TEST_CASE("derived mu and nu") {
    const HeunParams hp{2, 3, 5, 7, 11};
    CHECK(hp.mu() == doctest::Approx(7 + 2 * 10 / 2.0));
    CHECK(hp.nu() == doctest::Approx(11 + 1.5 + 3 * 4 / 2.0));
  }

  TEST_CASE("reduction divides by omega") {
    const RabiParams p{2.0, 0.4, 1.6, 0.2};
    const auto r = p.reduced();
    CHECK(r.is_reduced());
    CHECK(r.g == doctest::Approx(0.2));
    CHECK(r.delta == doctest::Approx(0.8));
    CHECK(r.epsilon == doctest::Approx(0.1));
  }

  TEST_CASE("validation rejects non-positive omega and non-finite fields") {
    CHECK_THROWS_AS((RabiParams{0.0, 0.1, 0.1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RabiParams{-1.0, 0.1, 0.1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RabiParams{1.0, NAN, 0.1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RabiParams{1.0, 0.1, INFINITY, 0.1}.validate()), std::invalid_argument);
    CHECK_NOTHROW((RabiParams{1.0, 0.0, 0.0, 0.0}.validate()));
  }
}
