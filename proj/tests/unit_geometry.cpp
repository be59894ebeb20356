#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <meanret/geometry.hpp>
#include <meanret/rng.hpp>

#include "oracles.hpp"

using meanret::ConvexBody;
using meanret::Matrix;
using meanret::Rng;
using meanret::Vector;

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

Matrix shear_shape() {
  Matrix s(2, 2);
  s << 1.0, 0.3, 0.0, 1.0;
  return s;
}

}  // namespace

TEST_CASE("inner product and dimension checks") {
  CHECK(meanret::inner(vec2(1, 2), vec2(3, -1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(meanret::inner(vec2(1, 2), Vector::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("operator norm agrees with the closed-form 2x2 singular value") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix m(2, 2);
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = rng.uniform(-2.0, 2.0);
    const auto [smax, smin] = oracles::singular_values_2x2(m);
    CHECK(meanret::operator_norm(m) == doctest::Approx(smax).epsilon(1e-12));
    CHECK(smin >= -1e-15);
  }
}

TEST_CASE("ball geometry") {
  const ConvexBody ball = ConvexBody::ball(vec2(1, -1), 2.0);
  CHECK(ball.dimension() == 2);
  CHECK(ball.diameter() == doctest::Approx(4.0));
  CHECK(ball.contains(vec2(1, 1)));
  CHECK_FALSE(ball.contains(vec2(1, 1.5)));

  // Radial projection: center + r (x - center)/|x - center|.
  const Vector p = ball.project(vec2(5, -1));
  CHECK(p(0) == doctest::Approx(3.0));
  CHECK(p(1) == doctest::Approx(-1.0));
  // Interior points are untouched.
  CHECK((ball.project(vec2(0.5, -0.5)) - vec2(0.5, -0.5)).norm() == 0.0);

  const auto [a, b] = ball.antipodal_pair();
  CHECK((a - b).norm() == doctest::Approx(ball.diameter()));
  CHECK(ball.contains(a));
  CHECK(ball.contains(b));
}

TEST_CASE("box geometry") {
  const ConvexBody box = ConvexBody::box(vec2(-1, 0), vec2(2, 1));
  CHECK(box.diameter() == doctest::Approx(std::sqrt(9.0 + 1.0)));
  const Vector p = box.project(vec2(3, -2));
  CHECK(p(0) == doctest::Approx(2.0));
  CHECK(p(1) == doctest::Approx(0.0));
  const auto [a, b] = box.antipodal_pair();
  CHECK((a - b).norm() == doctest::Approx(box.diameter()));
  CHECK_THROWS_AS(ConvexBody::box(vec2(1, 0), vec2(0, 1)),
                  std::invalid_argument);
}

TEST_CASE("ellipsoid diameter matches the closed-form top singular value") {
  const ConvexBody e = ConvexBody::ellipsoid(shear_shape(), 1.0);
  const auto [smax, smin] = oracles::singular_values_2x2(shear_shape());
  CHECK(smax == doctest::Approx(1.161187420807834).epsilon(1e-12));
  CHECK(e.diameter() == doctest::Approx(2.0 * smax).epsilon(1e-12));
  (void)smin;

  const auto [a, b] = e.antipodal_pair();
  CHECK((a - b).norm() == doctest::Approx(e.diameter()).epsilon(1e-12));
  CHECK(e.contains(a));
  CHECK(e.contains(b));
}

TEST_CASE("ellipsoid projection is a metric projection") {
  Rng rng(202);
  for (int dim : {2, 3, 5}) {
    Matrix shape(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) shape(i, j) = rng.gaussian();
    shape += 3.0 * Matrix::Identity(dim, dim);  // keep it comfortably invertible
    const ConvexBody e = ConvexBody::ellipsoid(shape, 1.3);

    for (int trial = 0; trial < 30; ++trial) {
      Vector x(dim);
      for (int i = 0; i < dim; ++i) x(i) = rng.uniform(-8.0, 8.0);
      const Vector p = e.project(x);
      CHECK(e.contains(p, 1e-8));
      // Idempotence.
      CHECK((e.project(p) - p).norm() <= 1e-9 * (1.0 + p.norm()));
      if (!e.contains(x)) {
        // Optimality: x - p is parallel to the outward normal Q p of the
        // boundary, where the ellipsoid is {y : y^T Q y <= r^2}.
        const Matrix shape_inv = shape.inverse();
        const Matrix q = shape_inv.transpose() * shape_inv;
        const Vector normal = q * p;
        const Vector d = x - p;
        const double cosang =
            d.dot(normal) / (d.norm() * normal.norm());
        CHECK(cosang == doctest::Approx(1.0).epsilon(1e-7));
        // No interior point of the segment [p, x] stays inside.
        CHECK_FALSE(e.contains(p + 0.05 * d, 1e-10));
      }
    }
  }
}

TEST_CASE("projection onto each body kind never increases distance to members") {
  // Metric projections onto convex sets are nonexpansive; spot-check the
  // defining inequality |P x - m| <= |x - m| for members m.
  Rng rng(303);
  const ConvexBody bodies[] = {
      ConvexBody::ball(vec2(0, 0), 1.0),
      ConvexBody::box(vec2(-1, -2), vec2(1, 0.5)),
      ConvexBody::ellipsoid(shear_shape(), 1.0),
  };
  for (const auto& body : bodies) {
    for (int trial = 0; trial < 40; ++trial) {
      const Vector m = body.sample(rng);
      Vector x(2);
      x << rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0);
      CHECK((body.project(x) - m).norm() <= (x - m).norm() + 1e-12);
    }
  }
}

TEST_CASE("samples land inside their body") {
  Rng rng(404);
  const ConvexBody bodies[] = {
      ConvexBody::ball(vec2(1, 2), 0.5),
      ConvexBody::box(vec2(-1, -1), vec2(1, 1)),
      ConvexBody::ellipsoid(shear_shape(), 2.0),
  };
  for (const auto& body : bodies) {
    for (int trial = 0; trial < 200; ++trial) {
      const Vector x = body.sample(rng);
      CHECK(body.contains(x, 1e-12));
      CHECK((body.project(x) - x).norm() <= 1e-12);
    }
  }
  // Seeded convenience sampler is deterministic.
  const Vector a = meanret::sample_point(bodies[0], 99);
  const Vector b = meanret::sample_point(bodies[0], 99);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(ConvexBody::ball(vec2(0, 0), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody::ball(vec2(0, 0), 0.0), std::invalid_argument);
  Matrix singular(2, 2);
  singular << 1.0, 2.0, 0.5, 1.0;
  CHECK_THROWS_AS(ConvexBody::ellipsoid(singular, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody::ball(vec2(0, 0), 1.0).lower(), std::logic_error);
}
