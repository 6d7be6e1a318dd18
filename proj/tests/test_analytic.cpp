#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rabi/analytic.hpp"
#include "rabi/errors.hpp"
#include "rabi/oracle.hpp"

using namespace rabi;

namespace {

const RabiParams kBiased{1.0, 0.2, 0.8, 0.1};

std::vector<double> energies(const std::vector<SpectrumPoint>& pts) {
  std::vector<double> out;
  for (const auto& p : pts) out.push_back(p.energy.value);
  return out;
}

std::vector<double> oracle_in(const RabiParams& p, double lo, double hi) {
  std::vector<double> out;
  for (double e : eigen(p, 12, 1e-12).eigenvalues) {
    if (e >= lo && e <= hi) out.push_back(e);
  }
  return out;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = INFINITY;
  for (double v : xs) best = std::min(best, std::abs(v - x));
  return best;
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("first family at the reference point has a divergent plus series") {
    const auto pair = build_pair(Family::First, Energy{0.86}, kBiased);
    CHECK(pair.plus_series.status() == SeriesStatus::DivergentBeta);
    CHECK_THROWS_AS(eval_component(pair, Component::Plus, 0.0), DivergentSolution);
  }

  TEST_CASE("second family at the reference point is polynomial") {
    const auto pair = build_pair(Family::Second, Energy{0.86}, kBiased);
    CHECK(pair.plus_series.truncation_degree() == 0);
    CHECK(pair.minus_series.truncation_degree() == 1);
    CHECK(pair.scale_plus == doctest::Approx(1.0).epsilon(1e-14));
    // psi_-^2(0) = 0.9 from the degree-one polynomial.
    CHECK(eval_component(pair, Component::Minus, 0.0).value ==
          doctest::Approx(0.9).epsilon(1e-12));
  }

  TEST_CASE("first-family component at z = g reduces to scale times exp(-g^2)") {
    const auto pair = build_pair(Family::First, Energy{0.3}, kBiased);
    const auto v = eval_component(pair, Component::Minus, kBiased.g);
    CHECK(v.value == doctest::Approx(pair.scale_minus * std::exp(-0.04)).epsilon(1e-14));
  }

  TEST_CASE("component derivative agrees with a central difference") {
    for (auto fam : {Family::First, Family::Second}) {
      const auto pair = build_pair(fam, Energy{0.41}, kBiased);
      for (auto c : {Component::Plus, Component::Minus}) {
        const double h = 1e-6;
        const double fd = (eval_component(pair, c, h).value - eval_component(pair, c, -h).value) /
                          (2 * h);
        CHECK(eval_component(pair, c, 0.0).derivative == doctest::Approx(fd).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("pair construction errors") {
    CHECK_THROWS_AS(build_pair(Family::First, Energy{0.5}, RabiParams{1, 0.0, 0.8, 0.1}),
                    UnsupportedParameter);
    CHECK_THROWS_AS(build_pair(Family::First, Energy{-0.04 - 0.1}, kBiased), PoleError);
    CHECK_THROWS_AS(build_pair(Family::Second, Energy{-0.04 + 0.1}, kBiased), PoleError);
    CHECK_THROWS_AS(wronskian(Energy{0.5}, RabiParams{1, 0.0, 0.8, 0.1}), UnsupportedParameter);
  }

  TEST_CASE("Wronskian vanishes at oracle eigenvalues") {
    const RabiParams p{1.0, 0.1, 0.8, 0.1};
    for (double e : oracle_in(p, -1.5, 1.5)) {
      const auto w = wronskian_plus(Energy{e}, p);
      REQUIRE(w.has_value());
      double scale = 0.0;
      for (double d : {-0.05, 0.05}) scale = std::max(scale, std::abs(*wronskian_plus(Energy{e + d}, p)));
      CHECK(std::abs(*w) <= 1e-8 * scale);
    }
  }

  TEST_CASE("the two Wronskians swap under bias reflection") {
    const RabiParams p{1.0, 0.35, 0.7, 0.23};
    RabiParams q = p;
    q.epsilon = -p.epsilon;
    for (double e : {-0.9, -0.2, 0.33, 1.27}) {
      const auto a = wronskian(Energy{e}, p);
      const auto b = wronskian(Energy{e}, q);
      REQUIRE(a.reliable);
      REQUIRE(b.reliable);
      CHECK(a.w_plus == doctest::Approx(b.w_minus).epsilon(1e-10));
    }
  }

  TEST_CASE("no regular root at the reference exceptional energy") {
    RegularSearchOptions opts;
    opts.suppress_exclusion = true;
    const auto roots = find_regular_spectrum(kBiased, 0.85, 0.87, 400, 1e-12, opts);
    CHECK(roots.empty());
  }

  TEST_CASE("regular spectra match the oracle") {
    struct Case {
      double g;
      std::size_t count;
    };
    for (const auto c : {Case{0.1, 4}, Case{0.2, 3}, Case{0.4, 4}}) {
      CAPTURE(c.g);
      const RabiParams p{1.0, c.g, 0.8, 0.1};
      const auto roots = find_regular_spectrum(p, -1.5, 1.5, 2000, 1e-12);
      CHECK(roots.size() == c.count);
      const auto ref = oracle_in(p, -1.5, 1.5);
      for (double e : energies(roots)) CHECK(nearest(ref, e) <= 1e-6);
      for (const auto& r : roots) CHECK(r.kind == LevelKind::Regular);
    }
  }

  TEST_CASE("regular roots stay outside exclusion windows") {
    const RabiParams p{1.0, 0.2, 0.8, 0.1};
    const auto roots = find_regular_spectrum(p, -1.5, 3.5, 2000, 1e-12);
    const auto cands = exceptional_candidates(p, -2.0, 4.0);
    for (double e : energies(roots)) CHECK(nearest(cands, e) >= 1e-3);
    CHECK(nearest(energies(roots), 0.86) > 1e-3);
  }

  TEST_CASE("scan is bit-for-bit deterministic") {
    const auto a = energies(find_regular_spectrum(kBiased, -1.5, 1.5, 2000, 1e-12));
    const auto b = energies(find_regular_spectrum(kBiased, -1.5, 1.5, 2000, 1e-12));
    CHECK(a == b);
  }

  TEST_CASE("exceptional candidates are listed in ascending order") {
    const auto c = exceptional_candidates(kBiased, -0.5, 2.0);
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(nearest(c, 0.86) <= 1e-14);
    CHECK(nearest(c, 1.06) <= 1e-14);
    CHECK(nearest(c, -0.14) <= 1e-14);
  }

  TEST_CASE("window search recovers levels hidden next to a candidate") {
    // Near a zero-bias degeneracy a regular level sits within 1e-3 of N - g^2.
    const RabiParams p{1.0, 0.3 + 2e-5, 0.8, 0.0};
    const double c = 1 - p.g * p.g;
    const auto hidden = find_window_roots(p, c - 0.01, c + 0.01, 1e-3, 120, 1e-13);
    const auto ref = oracle_in(p, c - 1e-3, c + 1e-3);
    REQUIRE_FALSE(ref.empty());
    CHECK(hidden.size() == ref.size());
    for (double e : energies(hidden)) CHECK(nearest(ref, e) <= 1e-8);
  }

  TEST_CASE("search argument validation") {
    CHECK_THROWS_AS(find_regular_spectrum(kBiased, 1.0, 1.0, 2000, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(find_regular_spectrum(kBiased, -1.0, 1.0, 99, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(find_regular_spectrum(kBiased, -1.0, 1.0, 2000, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(find_regular_spectrum(RabiParams{1, 0, 0.8, 0.1}, -1.0, 1.0, 2000, 1e-12),
                    UnsupportedParameter);
  }
}
