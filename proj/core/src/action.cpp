#include "meanret/action.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace meanret {
namespace {

constexpr std::uint64_t kDomainCheckSeed = 0x6d656172u;   // construction probes
constexpr std::uint64_t kLipschitzProbeSeed = 0x70726f62u;
constexpr int kDomainCheckSamples = 32;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

FixedSet FixedSet::from_body(ConvexBody body) {
  FixedSet f;
  f.body_ = std::move(body);
  return f;
}

FixedSet FixedSet::from_points(std::vector<Vector> points) {
  if (points.empty()) {
    throw std::invalid_argument("FixedSet: point list must be nonempty");
  }
  const Eigen::Index d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d || !p.allFinite()) {
      throw std::invalid_argument("FixedSet: malformed point");
    }
  }
  FixedSet f;
  f.points_ = std::move(points);
  return f;
}

int FixedSet::dimension() const {
  return body_ ? body_->dimension() : static_cast<int>(points_.front().size());
}

Vector FixedSet::nearest(const Vector& x) const {
  if (body_) return body_->project(x);
  const Vector* best = &points_.front();
  double dist = (x - *best).norm();
  for (const auto& p : points_) {
    const double d = (x - p).norm();
    if (d < dist) { dist = d; best = &p; }
  }
  return *best;
}

double FixedSet::distance(const Vector& x) const { return (x - nearest(x)).norm(); }

Vector FixedSet::sample(Rng& rng) const {
  if (body_) return body_->sample(rng);
  return points_[static_cast<std::size_t>(rng.index(points_.size()))];
}

bool FixedSet::contains(const Vector& x, double tol) const {
  return distance(x) <= tol;
}

const ConvexBody& FixedSet::body() const {
  if (!body_) throw std::logic_error("FixedSet: not body-backed");
  return *body_;
}

const FiniteSemigroup& LipschitzAction::semigroup() const {
  if (!semigroup_) throw std::logic_error("action over the naturals has no table");
  return *semigroup_;
}

Vector LipschitzAction::apply(int t, const Vector& x) const {
  if (x.size() != body_.dimension()) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
  if (index_ == IndexSet::Finite) {
    if (t < 0 || t >= semigroup_->size()) {
      throw std::invalid_argument("apply: element index out of range");
    }
    return eval_(t, x);
  }
  if (t < 1) throw std::invalid_argument("apply: naturals exponent must be >= 1");
  if (power_) return power_(t, x);
  Vector y = x;
  for (int i = 0; i < t; ++i) y = step_(y);
  return y;
}

Vector LipschitzAction::step(const Vector& x) const {
  if (index_ != IndexSet::Naturals) {
    throw std::logic_error("step: finite action has no generator step");
  }
  return step_(x);
}

Vector LipschitzAction::sample_fixed_point(Rng& rng) const {
  if (!fixed_sampler_) throw std::logic_error("action has no fixed point sampler");
  return fixed_sampler_(rng);
}

void LipschitzAction::check_domain_invariance() const {
  Rng rng(kDomainCheckSeed);
  const double tol = 1e-9 * (1.0 + body_.diameter());
  for (int i = 0; i < kDomainCheckSamples; ++i) {
    const Vector x = body_.sample(rng);
    if (index_ == IndexSet::Finite) {
      for (int t = 0; t < semigroup_->size(); ++t) {
        if (!body_.contains(eval_(t, x), tol)) {
          throw std::invalid_argument(
              "action: body is not invariant (element " +
              semigroup_->label(t) + " moved a sample out)");
        }
      }
    } else {
      Vector y = x;
      for (int n = 1; n <= window_; ++n) {
        y = step_(y);
        if (!body_.contains(y, tol)) {
          throw std::invalid_argument(
              "action: body is not invariant (power " + std::to_string(n) +
              " moved a sample out)");
        }
      }
    }
  }
}

LipschitzAction LipschitzAction::involution(Matrix a, ConvexBody body) {
  const int d = body.dimension();
  if (a.rows() != d || a.cols() != d) {
    throw std::invalid_argument("involution: matrix does not match body dimension");
  }
  if (max_abs(a * a - Matrix::Identity(d, d)) > 1e-10) {
    throw std::invalid_argument("involution: matrix squared is not the identity");
  }

  LipschitzAction act;
  act.index_ = IndexSet::Finite;
  act.semigroup_ = FiniteSemigroup::cyclic(2);
  act.body_ = std::move(body);
  act.k_ = std::max(1.0, operator_norm(a));
  act.analytic_ = true;
  act.family_ = "involution";

  auto powers = std::make_shared<std::vector<Matrix>>();
  powers->push_back(Matrix::Identity(d, d));
  powers->push_back(std::move(a));
  act.eval_ = [powers](int t, const Vector& x) { return Vector((*powers)[t] * x); };

  // (x + A x)/2 lands in ker(A - I) and stays inside the invariant body.
  const ConvexBody dom = act.body_;
  act.fixed_sampler_ = [powers, dom](Rng& rng) {
    const Vector x = dom.sample(rng);
    return Vector(0.5 * (x + (*powers)[1] * x));
  };

  act.check_domain_invariance();
  return act;
}

LipschitzAction LipschitzAction::cyclic_linear(const Matrix& conjugator,
                                               const Matrix& generator,
                                               int order, ConvexBody body) {
  const int d = body.dimension();
  if (order < 1) throw std::invalid_argument("cyclic_linear: order must be >= 1");
  if (conjugator.rows() != d || conjugator.cols() != d ||
      generator.rows() != d || generator.cols() != d) {
    throw std::invalid_argument("cyclic_linear: matrix dimensions do not match body");
  }
  Eigen::FullPivLU<Matrix> lu(conjugator);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("cyclic_linear: conjugator must be invertible");
  }
  Matrix gpow = Matrix::Identity(d, d);
  for (int i = 0; i < order; ++i) gpow = generator * gpow;
  if (max_abs(gpow - Matrix::Identity(d, d)) > 1e-10) {
    throw std::invalid_argument("cyclic_linear: generator order does not divide n");
  }

  const Matrix a = conjugator * generator * lu.inverse();

  LipschitzAction act;
  act.index_ = IndexSet::Finite;
  act.semigroup_ = FiniteSemigroup::cyclic(order);
  act.body_ = std::move(body);
  act.analytic_ = true;
  act.family_ = "cyclic_linear";

  auto powers = std::make_shared<std::vector<Matrix>>();
  Matrix p = Matrix::Identity(d, d);
  double k = 1.0;
  for (int m = 0; m < order; ++m) {
    if (m > 0) p = a * p;
    k = std::max(k, operator_norm(p));
    powers->push_back(p);
  }
  act.k_ = k;
  act.eval_ = [powers](int t, const Vector& x) { return Vector((*powers)[t] * x); };

  // Group averaging projects onto the common fixed subspace and respects
  // the invariant body by convexity.
  const ConvexBody dom = act.body_;
  const int n = order;
  act.fixed_sampler_ = [powers, dom, n](Rng& rng) {
    const Vector x = dom.sample(rng);
    Vector acc = Vector::Zero(x.size());
    for (int m = 0; m < n; ++m) acc += (*powers)[m] * x;
    return Vector(acc / n);
  };

  act.check_domain_invariance();
  return act;
}

LipschitzAction LipschitzAction::contraction(Vector p, double ratio,
                                             ConvexBody body) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("contraction: ratio must lie in [0, 1)");
  }
  if (!body.contains(p, 1e-9)) {
    throw std::invalid_argument("contraction: fixed point must lie in the body");
  }

  LipschitzAction act;
  act.index_ = IndexSet::Naturals;
  act.body_ = std::move(body);
  act.k_ = ratio;
  act.analytic_ = true;
  act.family_ = "contraction";

  const Vector fp = std::move(p);
  const double q = ratio;
  act.step_ = [fp, q](const Vector& x) { return Vector(fp + q * (x - fp)); };
  act.power_ = [fp, q](int n, const Vector& x) {
    return Vector(fp + std::pow(q, n) * (x - fp));
  };
  act.fixed_sampler_ = [fp](Rng&) { return fp; };

  act.check_domain_invariance();
  return act;
}

LipschitzAction LipschitzAction::dist_perturbation(FixedSet f, Vector anchor,
                                                   double eps, ConvexBody body,
                                                   int window) {
  if (window < 1) throw std::invalid_argument("dist_perturbation: window must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("dist_perturbation: eps must be positive");
  if (f.dimension() != body.dimension() || anchor.size() != body.dimension()) {
    throw std::invalid_argument("dist_perturbation: dimension mismatch");
  }
  if (!f.contains(anchor, 1e-9)) {
    throw std::invalid_argument("dist_perturbation: anchor must lie in the target set");
  }
  if (eps * body.diameter() > 1.0 + 1e-12) {
    // T x = (1 - eps d) x + eps d anchor is a convex combination only while
    // eps dist(x, F) <= 1; beyond that the map can leave the body.
    throw std::invalid_argument(
        "dist_perturbation: eps * diameter must be <= 1 for a self-map");
  }
  {
    const double tol = 1e-9 * (1.0 + body.diameter());
    if (f.is_body()) {
      Rng rng(kDomainCheckSeed);
      for (int i = 0; i < kDomainCheckSamples; ++i) {
        if (!body.contains(f.sample(rng), tol)) {
          throw std::invalid_argument("dist_perturbation: target set leaves the body");
        }
      }
    } else {
      for (const auto& pt : f.points()) {
        if (!body.contains(pt, tol)) {
          throw std::invalid_argument("dist_perturbation: target point outside the body");
        }
      }
    }
  }

  LipschitzAction act;
  act.index_ = IndexSet::Naturals;
  act.body_ = std::move(body);
  act.family_ = "dist_perturbation";
  act.window_ = window;

  auto target = std::make_shared<FixedSet>(std::move(f));
  const Vector z = std::move(anchor);
  act.step_ = [target, z, eps](const Vector& x) {
    return Vector(x + (eps * target->distance(x)) * (z - x));
  };
  act.fixed_sampler_ = [target](Rng& rng) { return target->sample(rng); };

  act.check_domain_invariance();

  // No analytic uniform bound is known for the powers of this family, so
  // report the empirical supremum over the window instead of claiming one.
  act.k_ = 1.0;
  act.analytic_ = false;
  Rng rng(kLipschitzProbeSeed);
  for (int i = 0; i < 24; ++i) {
    Vector x = act.body_.sample(rng);
    Vector y = act.body_.sample(rng);
    const double base = (x - y).norm();
    if (base < 1e-12) continue;
    for (int n = 1; n <= window; ++n) {
      x = act.step_(x);
      y = act.step_(y);
      act.k_ = std::max(act.k_, (x - y).norm() / base);
    }
  }
  return act;
}

LipschitzAction LipschitzAction::custom(
    FiniteSemigroup s, ConvexBody body,
    std::function<Vector(int, const Vector&)> eval, double declared_k,
    std::string family, std::function<Vector(Rng&)> fixed_sampler) {
  if (!eval) throw std::invalid_argument("custom: eval must be callable");
  if (!(declared_k > 0)) throw std::invalid_argument("custom: declared_k must be positive");

  LipschitzAction act;
  act.index_ = IndexSet::Finite;
  act.semigroup_ = std::move(s);
  act.body_ = std::move(body);
  act.eval_ = std::move(eval);
  act.k_ = declared_k;
  act.analytic_ = true;
  act.family_ = std::move(family);
  act.fixed_sampler_ = std::move(fixed_sampler);

  act.check_domain_invariance();
  return act;
}

double estimate_uniform_lipschitz(const LipschitzAction& action, int samples,
                                  std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("estimate_uniform_lipschitz: samples >= 1");
  Rng rng(seed);
  const ConvexBody& body = action.domain();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector x = body.sample(rng);
    const Vector y = body.sample(rng);
    const double base = (x - y).norm();
    if (base < 1e-12) continue;
    if (!action.over_naturals()) {
      for (int t = 0; t < action.semigroup().size(); ++t) {
        worst = std::max(
            worst, (action.apply(t, x) - action.apply(t, y)).norm() / base);
      }
    } else {
      Vector xs = x;
      Vector ys = y;
      for (int n = 1; n <= action.window(); ++n) {
        xs = action.step(xs);
        ys = action.step(ys);
        worst = std::max(worst, (xs - ys).norm() / base);
      }
    }
  }
  if (action.k_is_analytic() && worst > action.declared_k() + 1e-9) {
    throw std::logic_error(
        "estimate_uniform_lipschitz: sampled ratio exceeds the declared bound");
  }
  return worst;
}

double check_homomorphism(const LipschitzAction& action, int samples,
                          std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_homomorphism: samples >= 1");
  Rng rng(seed);
  const ConvexBody& body = action.domain();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector x = body.sample(rng);
    if (!action.over_naturals()) {
      const int n = action.semigroup().size();
      const int s = static_cast<int>(rng.index(n));
      const int t = static_cast<int>(rng.index(n));
      const Vector lhs = action.apply(action.semigroup().product(s, t), x);
      const Vector rhs = action.apply(s, action.apply(t, x));
      worst = std::max(worst, (lhs - rhs).norm());
    } else {
      const int half = std::max(1, action.window() / 2);
      const int s = 1 + static_cast<int>(rng.index(half));
      const int t = 1 + static_cast<int>(rng.index(half));
      const Vector lhs = action.apply(s + t, x);
      const Vector rhs = action.apply(s, action.apply(t, x));
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

}  // namespace meanret
