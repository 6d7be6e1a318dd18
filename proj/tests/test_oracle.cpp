#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rabi/oracle.hpp"

using namespace rabi;

namespace {

const RabiParams kBiased{1.0, 0.2, 0.8, 0.1};

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("uncoupled unbiased levels are n plus or minus delta") {
    const auto r = diagonalize(RabiParams{1, 0, 0.3, 0}, 10);
    for (int n = 0; n < 5; ++n) {
      CHECK(r.eigenvalues[2 * n] == doctest::Approx(n - 0.3).epsilon(1e-14));
      CHECK(r.eigenvalues[2 * n + 1] == doctest::Approx(n + 0.3).epsilon(1e-14));
    }
  }

  TEST_CASE("uncoupled biased levels use the rotated splitting") {
    const auto r = eigen(RabiParams{1, 0, 0.8, 0.1}, 6, 1e-12);
    const double s = std::sqrt(0.65);
    std::vector<double> expect;
    for (int n = 0; n < 4; ++n) expect.insert(expect.end(), {n - s, n + s});
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 6; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  }

  TEST_CASE("zero splitting gives doubly degenerate displaced levels") {
    const double g = 0.6;
    const auto r = eigen(RabiParams{1, g, 0.0, 0.0}, 8, 1e-12);
    for (int i = 0; i < 8; ++i) {
      CHECK(r.eigenvalues[i] == doctest::Approx(i / 2 - g * g).epsilon(1e-10));
    }
  }

  TEST_CASE("third level at the reference point") {
    const auto r = eigen(kBiased, 4, 1e-12);
    CHECK(std::abs(r.eigenvalues[2] - 0.86) <= 1e-8);
    CHECK(r.converged_count == 4);
    CHECK(r.requested == 4);
  }

  TEST_CASE("degenerate pair at the half-bias crossing") {
    const auto r = eigen(RabiParams{1, 0.5 * std::sqrt(1.36), 0.8, 0.5}, 6, 1e-12);
    int near = 0;
    for (double e : r.eigenvalues) near += std::abs(e - 1.16) <= 1e-6;
    CHECK(near == 2);
  }

  TEST_CASE("matrix is symmetric with the documented layout") {
    const auto h = build_hamiltonian(kBiased, 5);
    CHECK(h.rows() == 12);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h(0, 0) == doctest::Approx(-0.8));
    CHECK(h(1, 1) == doctest::Approx(0.8));
    CHECK(h(0, 1) == doctest::Approx(0.1));
    CHECK(h(0, 3) == doctest::Approx(0.2));
    CHECK(h(1, 2) == doctest::Approx(0.2));
    CHECK(h(2, 5) == doctest::Approx(0.2 * std::sqrt(2.0)));
  }

  TEST_CASE("eigenvectors are orthonormal and satisfy the eigen equation") {
    const auto r = eigen(kBiased, 5, 1e-12, true);
    REQUIRE(r.eigenvectors.size() == r.eigenvalues.size());
    for (int i = 0; i < 5; ++i) {
      CHECK(r.eigenvectors[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(eigenvector_overlap(r.eigenvectors[i], r.eigenvectors[i]) ==
            doctest::Approx(1.0).epsilon(1e-12));
      CHECK(hamiltonian_residual(r.eigenvectors[i], r.eigenvalues[i], kBiased) <= 1e-9);
      for (int j = i + 1; j < 5; ++j) {
        CHECK(eigenvector_overlap(r.eigenvectors[i], r.eigenvectors[j]) <= 1e-10);
      }
    }
  }

  TEST_CASE("overlap zero-pads the shorter state") {
    const auto r = eigen(kBiased, 3, 1e-12, true);
    const auto& v = r.eigenvectors[0];
    CHECK(eigenvector_overlap(v, v.resized(v.cutoff() + 17)) == doctest::Approx(1.0));
    CHECK(subspace_overlap(v, r, r.eigenvalues[0]) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("eigenvalues ascend and do not depend on the bias sign") {
    auto q = kBiased;
    q.epsilon = -q.epsilon;
    const auto a = eigen(kBiased, 10, 1e-12);
    const auto b = eigen(q, 10, 1e-12);
    for (int i = 0; i < 10; ++i) {
      if (i > 0) CHECK(a.eigenvalues[i] >= a.eigenvalues[i - 1]);
      CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-11));
    }
  }

  TEST_CASE("state container validation") {
    CHECK_THROWS_AS(SpinFockState(2, std::vector<double>(5)), std::invalid_argument);
    const SpinFockState s(1, {0.0, 3.0, 4.0, 0.0});
    CHECK(s.amplitude(0, Spin::Up) == 3.0);
    CHECK(s.amplitude(1, Spin::Down) == 4.0);
    CHECK(s.norm() == doctest::Approx(5.0));
    CHECK(s.normalized().norm() == doctest::Approx(1.0));
  }

  TEST_CASE("oracle argument validation") {
    CHECK_THROWS_AS(diagonalize(kBiased, 0), std::invalid_argument);
    CHECK_THROWS_AS(eigen(kBiased, 0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(eigen(kBiased, 3, 0.0), std::invalid_argument);
  }
}
