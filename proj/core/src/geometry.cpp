#include "meanret/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace meanret {
namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": entries must be finite");
  }
}

}  // namespace

double inner(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  return x.dot(y);
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) {
    throw std::invalid_argument("operator_norm: empty matrix");
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

ConvexBody ConvexBody::ball(Vector center, double radius) {
  require_finite(center, "ball center");
  if (center.size() == 0) throw std::invalid_argument("ball: empty center");
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball: radius must be positive and finite");
  }
  ConvexBody b;
  b.kind_ = BodyKind::Ball;
  b.dim_ = static_cast<int>(center.size());
  b.center_ = std::move(center);
  b.radius_ = radius;
  b.diameter_ = 2.0 * radius;
  return b;
}

ConvexBody ConvexBody::box(Vector lower, Vector upper) {
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw std::invalid_argument("box: corner dimension mismatch");
  }
  if (((upper - lower).array() <= 0).any()) {
    throw std::invalid_argument("box: requires lower < upper componentwise");
  }
  ConvexBody b;
  b.kind_ = BodyKind::Box;
  b.dim_ = static_cast<int>(lower.size());
  b.lower_ = std::move(lower);
  b.upper_ = std::move(upper);
  b.diameter_ = (b.upper_ - b.lower_).norm();
  return b;
}

ConvexBody ConvexBody::ellipsoid(Matrix shape, double radius) {
  if (shape.rows() == 0 || shape.rows() != shape.cols()) {
    throw std::invalid_argument("ellipsoid: shape matrix must be square");
  }
  if (!shape.allFinite()) {
    throw std::invalid_argument("ellipsoid: shape entries must be finite");
  }
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ellipsoid: radius must be positive and finite");
  }
  Eigen::FullPivLU<Matrix> lu(shape);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("ellipsoid: shape matrix must be invertible");
  }
  ConvexBody b;
  b.kind_ = BodyKind::Ellipsoid;
  b.dim_ = static_cast<int>(shape.rows());
  b.radius_ = radius;
  b.shape_ = std::move(shape);
  b.shape_inv_ = lu.inverse();

  Eigen::JacobiSVD<Matrix> svd(b.shape_, Eigen::ComputeFullV);
  b.diameter_ = 2.0 * radius * svd.singularValues()(0);
  b.top_direction_ = svd.matrixV().col(0);

  const Matrix q = b.shape_inv_.transpose() * b.shape_inv_;
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("ellipsoid: eigendecomposition failed");
  }
  b.q_eigenvalues_ = es.eigenvalues();
  b.q_eigenvectors_ = es.eigenvectors();
  return b;
}

std::string ConvexBody::kind_name() const {
  switch (kind_) {
    case BodyKind::Ball: return "ball";
    case BodyKind::Box: return "box";
    case BodyKind::Ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

bool ConvexBody::contains(const Vector& x, double tol) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  switch (kind_) {
    case BodyKind::Ball:
      return (x - center_).norm() <= radius_ + tol;
    case BodyKind::Box:
      return (x.array() >= lower_.array() - tol).all() &&
             (x.array() <= upper_.array() + tol).all();
    case BodyKind::Ellipsoid:
      return (shape_inv_ * x).norm() <= radius_ + tol;
  }
  return false;
}

Vector ConvexBody::project(const Vector& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("project: dimension mismatch");
  }
  require_finite(x, "project input");
  switch (kind_) {
    case BodyKind::Ball: {
      const Vector d = x - center_;
      const double n = d.norm();
      if (n <= radius_) return x;
      return center_ + d * (radius_ / n);
    }
    case BodyKind::Box:
      return x.cwiseMax(lower_).cwiseMin(upper_);
    case BodyKind::Ellipsoid:
      return project_ellipsoid(x);
  }
  throw std::logic_error("project: unreachable");
}

Vector ConvexBody::project_ellipsoid(const Vector& x) const {
  // Membership slack keeps the projection idempotent: a point returned by a
  // previous call sits on the constraint surface up to rounding.
  if ((shape_inv_ * x).norm() <= radius_ * (1.0 + 1e-12) + 1e-15) return x;

  // Minimize |y - x| subject to y^T Q y = r^2.  The stationarity condition
  // y = (I + lam Q)^-1 x reduces, in the eigenbasis of Q, to a scalar root
  // g(lam) = sum_i d_i c_i^2 / (1 + lam d_i)^2 - r^2 = 0 with g strictly
  // decreasing on lam >= 0.
  const Vector c = q_eigenvectors_.transpose() * x;
  const Vector& d = q_eigenvalues_;
  const double r2 = radius_ * radius_;

  const auto g = [&](double lam) {
    double s = 0;
    for (int i = 0; i < dim_; ++i) {
      const double t = 1.0 + lam * d(i);
      s += d(i) * c(i) * c(i) / (t * t);
    }
    return s - r2;
  };
  const auto dg = [&](double lam) {
    double s = 0;
    for (int i = 0; i < dim_; ++i) {
      const double t = 1.0 + lam * d(i);
      s += -2.0 * d(i) * d(i) * c(i) * c(i) / (t * t * t);
    }
    return s;
  };

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 400 && g(hi) > 0; ++i) hi *= 2.0;
  if (g(hi) > 0) throw std::runtime_error("project: multiplier bracket failed");

  double lam = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double glam = g(lam);
    if (glam > 0) lo = lam; else hi = lam;
    if (std::abs(glam) <= 1e-14 * r2) break;
    const double step = dg(lam);
    double next = (step != 0) ? lam - glam / step : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - lam) <= 1e-15 * (1.0 + lam)) { lam = next; break; }
    lam = next;
  }

  Vector yhat(dim_);
  for (int i = 0; i < dim_; ++i) yhat(i) = c(i) / (1.0 + lam * d(i));
  return q_eigenvectors_ * yhat;
}

Vector ConvexBody::sample(Rng& rng) const {
  switch (kind_) {
    case BodyKind::Box: {
      Vector x(dim_);
      for (int i = 0; i < dim_; ++i) {
        x(i) = lower_(i) + (upper_(i) - lower_(i)) * rng.uniform();
      }
      return x;
    }
    case BodyKind::Ball:
    case BodyKind::Ellipsoid: {
      Vector g(dim_);
      for (int i = 0; i < dim_; ++i) g(i) = rng.gaussian();
      double n = g.norm();
      if (n < 1e-300) { g.setZero(); g(0) = 1.0; n = 1.0; }
      const double rad =
          radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim_));
      const Vector u = g * (rad / n);
      if (kind_ == BodyKind::Ball) return center_ + u;
      return shape_ * u;  // linear image of the uniform ball is uniform
    }
  }
  throw std::logic_error("sample: unreachable");
}

std::pair<Vector, Vector> ConvexBody::antipodal_pair() const {
  switch (kind_) {
    case BodyKind::Ball: {
      Vector e = Vector::Zero(dim_);
      e(0) = radius_;
      return {center_ - e, center_ + e};
    }
    case BodyKind::Box:
      return {lower_, upper_};
    case BodyKind::Ellipsoid: {
      const Vector v = shape_ * (radius_ * top_direction_);
      return {-v, v};
    }
  }
  throw std::logic_error("antipodal_pair: unreachable");
}

const Vector& ConvexBody::center() const {
  if (kind_ != BodyKind::Ball) throw std::logic_error("center: not a ball");
  return center_;
}

double ConvexBody::radius() const {
  if (kind_ == BodyKind::Box) throw std::logic_error("radius: box has none");
  return radius_;
}

const Vector& ConvexBody::lower() const {
  if (kind_ != BodyKind::Box) throw std::logic_error("lower: not a box");
  return lower_;
}

const Vector& ConvexBody::upper() const {
  if (kind_ != BodyKind::Box) throw std::logic_error("upper: not a box");
  return upper_;
}

const Matrix& ConvexBody::shape() const {
  if (kind_ != BodyKind::Ellipsoid) {
    throw std::logic_error("shape: not an ellipsoid");
  }
  return shape_;
}

Vector sample_point(const ConvexBody& body, std::uint64_t seed) {
  Rng rng(seed);
  return body.sample(rng);
}

}  // namespace meanret
