#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <meanret/mean.hpp>
#include <meanret/rng.hpp>
#include <meanret/semigroup.hpp>

#include "oracles.hpp"

using meanret::FiniteSemigroup;
using meanret::Mean;
using meanret::Rng;
using meanret::Vector;

TEST_CASE("window mean over {1..N} is uniform with defect exactly 2/N") {
  for (int n : {1, 2, 10, 100, 1000}) {
    const Mean mu = meanret::folner_mean(n);
    REQUIRE(mu.weights.size() == n);
    for (int i = 0; i < n; ++i)
      CHECK(mu.weights(i) == doctest::Approx(1.0 / n).epsilon(1e-15));
    // Shifting the window by one drops 1/N at each end, so the translation
    // defect of the uniform window is exactly 2/N.
    CHECK(mu.defect == 2.0 / n);
    CHECK_FALSE(mu.exact);
  }
}

TEST_CASE("window defect formula matches a direct shift computation") {
  Rng rng(111);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(20));
    Vector w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.uniform(0.0, 1.0);
    w /= w.sum();
    // Direct |shift(w) - w|_1 with the shift dropping off the window edge:
    // (shift w)(u) = w(u+1), mass w(0) leaves through position 0 and the
    // tail contributes |w(n-1)|.
    double direct = std::abs(w(0));
    for (int u = 0; u + 1 < n; ++u) direct += std::abs(w(u + 1) - w(u));
    direct += std::abs(w(n - 1));
    CHECK(meanret::window_invariance_defect(w) ==
          doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("invariance defect vanishes exactly for uniform weights on groups") {
  for (int n = 2; n <= 8; ++n) {
    const FiniteSemigroup s = FiniteSemigroup::cyclic(n);
    const Vector uniform = Vector::Constant(n, 1.0 / n);
    CHECK(meanret::invariance_defect(s, uniform) <= 1e-15);
  }
}

TEST_CASE("solver returns the uniform mean on cyclic groups") {
  for (int n = 2; n <= 8; ++n) {
    const auto res =
        meanret::solve_left_invariant_mean(FiniteSemigroup::cyclic(n));
    REQUIRE(res.feasible());
    const Mean& mu = *res.mean;
    CHECK(mu.exact);
    CHECK(mu.defect <= 1e-9);
    for (int i = 0; i < n; ++i)
      CHECK(mu.weights(i) == doctest::Approx(1.0 / n).epsilon(1e-10));
  }
}

TEST_CASE("left-zero semigroups admit no left-invariant mean") {
  for (int n = 2; n <= 5; ++n) {
    const auto res =
        meanret::solve_left_invariant_mean(FiniteSemigroup::left_zero(n));
    CHECK_FALSE(res.feasible());
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->infeasibility > 1e-6);
  }
  // One element is the degenerate exception: the point mass works.
  CHECK(meanret::solve_left_invariant_mean(FiniteSemigroup::left_zero(1))
            .feasible());
}

TEST_CASE("right-zero semigroups canonicalize to the uniform mean") {
  // Every weight vector is left-invariant for st = t, so the solver's
  // closest-to-uniform rule must return exactly the uniform weights.
  for (int n = 2; n <= 5; ++n) {
    const auto res =
        meanret::solve_left_invariant_mean(FiniteSemigroup::right_zero(n));
    REQUIRE(res.feasible());
    for (int i = 0; i < n; ++i)
      CHECK(res.mean->weights(i) == doctest::Approx(1.0 / n).epsilon(1e-9));
  }
}

TEST_CASE("absorbing zero forces the point mass") {
  // In (Z_m, *), translation by 0 sends every mean to the point mass at 0,
  // so the only invariant mean is that point mass.
  for (int m : {2, 3, 5, 6}) {
    std::vector<std::vector<int>> table(static_cast<std::size_t>(m),
                                        std::vector<int>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (i * j) % m;
    const auto res = meanret::solve_left_invariant_mean(
        FiniteSemigroup::from_table({}, table));
    REQUIRE(res.feasible());
    CHECK(res.mean->weights(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.mean->defect <= 1e-9);
  }
}

TEST_CASE("random commutative semigroups always admit an exact mean") {
  Rng rng(222);
  for (int trial = 0; trial < 50; ++trial) {
    const auto table = oracles::commutative_random_table(rng);
    const auto res = meanret::solve_left_invariant_mean(
        FiniteSemigroup::from_table({}, table));
    REQUIRE(res.feasible());
    CHECK(res.mean->defect <= 1e-9);
    CHECK(res.mean->exact);
    CHECK(res.mean->weights.minCoeff() >= -1e-12);
    CHECK(res.mean->weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("explicit weight validation") {
  const FiniteSemigroup s = FiniteSemigroup::cyclic(3);
  Vector w(3);
  w << 0.2, 0.3, 0.5;
  const Mean mu = meanret::mean_on_semigroup(s, w);
  CHECK(mu.defect > 0.0);
  CHECK_FALSE(mu.exact);

  w << 0.2, 0.3, 0.4;  // does not sum to one
  CHECK_THROWS_AS(meanret::mean_on_semigroup(s, w), std::invalid_argument);
  w << 0.6, 0.6, -0.2;  // negative mass
  CHECK_THROWS_AS(meanret::mean_on_semigroup(s, w), std::invalid_argument);
  w << 0.5, 0.5, std::nan("");
  CHECK_THROWS_AS(meanret::mean_on_semigroup(s, w), std::invalid_argument);
  CHECK_THROWS_AS(meanret::mean_on_semigroup(s, Vector::Constant(2, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("uniform weights on a group validate as exact") {
  const FiniteSemigroup s = FiniteSemigroup::cyclic(4);
  const Mean mu = meanret::mean_on_semigroup(s, Vector::Constant(4, 0.25));
  CHECK(mu.exact);
  CHECK(mu.defect <= 1e-15);
}
