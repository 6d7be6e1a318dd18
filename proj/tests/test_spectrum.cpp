#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rabi/oracle.hpp"
#include "rabi/spectrum.hpp"

using namespace rabi;

namespace {

const RabiParams kBiased{1.0, 0.2, 0.8, 0.1};

int count_kind(const std::vector<SpectrumPoint>& pts, LevelKind k) {
  return static_cast<int>(
      std::count_if(pts.begin(), pts.end(), [k](const auto& p) { return p.kind == k; }));
}

int oracle_count(const RabiParams& p, double lo, double hi) {
  int n = 0;
  for (double e : eigen(p, 20, 1e-12).eigenvalues) n += e >= lo && e <= hi;
  return n;
}

void check_clean(const std::vector<SpectrumPoint>& pts) {
  for (const auto& p : pts) {
    CHECK_FALSE(p.flagged);
    CHECK(p.provenance != Provenance::OracleAssisted);
    CHECK(p.oracle_delta <= 1e-6);
  }
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("reference window holds three regular levels and one exceptional") {
    const auto pts = assemble(kBiased, -1.5, 1.5, 4);
    REQUIRE(pts.size() == 4);
    CHECK(count_kind(pts, LevelKind::Regular) == 3);
    REQUIRE(count_kind(pts, LevelKind::Exceptional) == 1);
    const auto ex = *std::find_if(pts.begin(), pts.end(),
                                  [](const auto& p) { return p.kind == LevelKind::Exceptional; });
    CHECK(ex.n == 1);
    CHECK(ex.branch == Branch::Minus);
    CHECK(ex.energy.value == doctest::Approx(0.86).epsilon(1e-12));
    CHECK(ex.provenance == Provenance::Truncation);
    check_clean(pts);
    CHECK(std::is_sorted(pts.begin(), pts.end(),
                         [](const auto& a, const auto& b) { return a.energy < b.energy; }));
  }

  TEST_CASE("weak coupling window is purely regular") {
    const RabiParams p{1.0, 0.1, 0.8, 0.1};
    const auto pts = assemble(p, -1.5, 1.5, 4);
    CHECK(pts.size() == 4);
    CHECK(count_kind(pts, LevelKind::Exceptional) == 0);
    check_clean(pts);
  }

  TEST_CASE("half-bias crossing collapses into one doubly degenerate point") {
    const RabiParams p{1.0, 0.5 * std::sqrt(1.36), 0.8, 0.5};
    const auto pts = assemble(p, 0.5, 2.0, 4);
    const auto it = std::find_if(pts.begin(), pts.end(), [](const auto& x) {
      return std::abs(x.energy.value - 1.16) <= 1e-8;
    });
    REQUIRE(it != pts.end());
    CHECK(it->degeneracy == 2);
    CHECK(it->kind == LevelKind::Exceptional);
    CHECK(level_count(pts) == oracle_count(p, 0.5, 2.0));
    check_clean(pts);
  }

  TEST_CASE("zero-bias exceptional level is doubly degenerate") {
    const RabiParams p{1.0, 0.3, 0.8, 0.0};
    const auto pts = assemble(p, 0.5, 1.5, 4);
    const auto it = std::find_if(pts.begin(), pts.end(), [](const auto& x) {
      return x.kind == LevelKind::Exceptional && std::abs(x.energy.value - 0.91) <= 1e-8;
    });
    REQUIRE(it != pts.end());
    CHECK(it->degeneracy == 2);
  }

  TEST_CASE("zero coupling falls back to the oracle") {
    const RabiParams p{1.0, 0.0, 0.8, 0.1};
    const auto pts = assemble(p, -1.5, 2.5, 4);
    const double s = std::sqrt(0.65);
    std::vector<double> expect;
    for (int n = 0; n < 4; ++n) expect.insert(expect.end(), {n - s, n + s});
    std::sort(expect.begin(), expect.end());
    REQUIRE(pts.size() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(pts[i].provenance == Provenance::OracleOnly);
      CHECK(pts[i].energy.value == doctest::Approx(expect[i]).epsilon(1e-10));
    }
  }

  TEST_CASE("level count matches the oracle across couplings") {
    for (double g : {0.05, 0.25, 0.5, 0.8, 1.1}) {
      CAPTURE(g);
      const RabiParams p{1.0, g, 0.8, 0.1};
      const auto pts = assemble(p, -2.5, 3.0, 4);
      CHECK(level_count(pts) == oracle_count(p, -2.5, 3.0));
      check_clean(pts);
    }
  }

  TEST_CASE("assemble rejects an empty window") {
    CHECK_THROWS_AS(assemble(kBiased, 1.0, 1.0, 4), std::invalid_argument);
  }

  TEST_CASE("short coupling sweep") {
    SweepOptions opts;
    opts.marker_steps = 200;
    const auto res = sweep(kBiased, SweepAxis::G, {0.0, 0.3, 4}, opts);
    REQUIRE(res.axis_values.size() == 4);
    REQUIRE(res.levels.size() == 4);
    CHECK(res.failures.empty());
    for (const auto& pt : res.levels[0]) CHECK(pt.provenance == Provenance::OracleOnly);
    for (std::size_t i = 1; i < 4; ++i) {
      CHECK(level_count(res.levels[i]) >= opts.levels);
      check_clean(res.levels[i]);
    }
    const bool has_reference = std::any_of(res.markers.begin(), res.markers.end(), [](const auto& m) {
      return m.point.n == 1 && m.point.branch == Branch::Minus &&
             std::abs(m.point.axis_value - 0.2) <= 1e-8;
    });
    CHECK(has_reference);
  }

  TEST_CASE("generic bias sweep has no degenerate markers") {
    SweepOptions opts;
    opts.n_max = 2;
    const auto res = sweep(RabiParams{1, 0, 0.8, 0.15}, SweepAxis::G, {0.0, 1.2, 3}, opts);
    REQUIRE_FALSE(res.markers.empty());
    for (const auto& m : res.markers) CHECK(m.degeneracy == 1);
  }

  TEST_CASE("sweeps are deterministic") {
    SweepOptions opts;
    opts.n_max = 2;
    const auto a = sweep(kBiased, SweepAxis::Epsilon, {-0.2, 0.2, 3}, opts);
    const auto b = sweep(kBiased, SweepAxis::Epsilon, {-0.2, 0.2, 3}, opts);
    REQUIRE(a.levels.size() == b.levels.size());
    for (std::size_t i = 0; i < a.levels.size(); ++i) {
      REQUIRE(a.levels[i].size() == b.levels[i].size());
      for (std::size_t j = 0; j < a.levels[i].size(); ++j) {
        CHECK(a.levels[i][j].energy.value == b.levels[i][j].energy.value);
      }
    }
    CHECK(a.markers.size() == b.markers.size());
  }

  TEST_CASE("sweep needs two steps") {
    CHECK_THROWS_AS(sweep(kBiased, SweepAxis::G, {0.0, 1.0, 1}), std::invalid_argument);
  }
}
