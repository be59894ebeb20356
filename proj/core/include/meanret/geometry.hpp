#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>

#include "meanret/rng.hpp"

namespace meanret {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Euclidean inner product with a dimension check.
double inner(const Vector& x, const Vector& y);

/// Largest singular value.
double operator_norm(const Matrix& a);

enum class BodyKind { Ball, Box, Ellipsoid };

/// A bounded closed convex subset of R^d supporting exact metric projection,
/// diameter, membership, and seeded sampling.
///
/// Three kinds are provided:
///   ball(center, r)     { x : |x - center| <= r }
///   box(lower, upper)   axis-aligned product of intervals, lower < upper
///   ellipsoid(S, r)     { S u : |u| <= r } for an invertible shape matrix S
///
/// Ellipsoids are the invariant domains for linear maps A = S D S^-1 with
/// |A| > 1: A maps the body onto itself whenever D is orthogonal.  Their
/// projection is the true metric projection, computed by solving for the
/// Lagrange multiplier of the nearest-point problem with a safeguarded
/// Newton iteration (not the radial shortcut in transformed coordinates,
/// which is not distance-minimizing).
class ConvexBody {
 public:
  static ConvexBody ball(Vector center, double radius);
  static ConvexBody box(Vector lower, Vector upper);
  static ConvexBody ellipsoid(Matrix shape, double radius);

  int dimension() const { return dim_; }
  BodyKind kind() const { return kind_; }
  std::string kind_name() const;

  /// Exact diameter: 2r for balls, |upper - lower| for boxes,
  /// 2 r sigma_max(S) for ellipsoids.
  double diameter() const { return diameter_; }

  bool contains(const Vector& x, double tol = 1e-9) const;

  /// Metric projection onto the body; identity on members, idempotent and
  /// 1-Lipschitz up to 1e-12.
  Vector project(const Vector& x) const;

  /// Uniform sample from the body.  Same generator state gives the same
  /// point; all draws consume a deterministic number of variates.
  Vector sample(Rng& rng) const;

  /// A pair of points of the body realizing the diameter.
  std::pair<Vector, Vector> antipodal_pair() const;

  // Kind-specific accessors; throw std::logic_error on the wrong kind.
  const Vector& center() const;
  double radius() const;
  const Vector& lower() const;
  const Vector& upper() const;
  const Matrix& shape() const;

 private:
  ConvexBody() = default;

  Vector project_ellipsoid(const Vector& x) const;

  BodyKind kind_ = BodyKind::Ball;
  int dim_ = 0;
  double diameter_ = 0;

  Vector center_;          // ball
  double radius_ = 0;      // ball, ellipsoid
  Vector lower_, upper_;   // box
  Matrix shape_;           // ellipsoid S
  Matrix shape_inv_;       // S^-1
  // Eigendecomposition of Q = (S S^T)^-1, cached for projection:
  // membership is x^T Q x <= r^2.
  Vector q_eigenvalues_;
  Matrix q_eigenvectors_;
  Vector top_direction_;   // unit u maximizing |S u|
};

/// Convenience wrapper: one sample drawn from a fresh generator.
Vector sample_point(const ConvexBody& body, std::uint64_t seed);

}  // namespace meanret
