#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meanret/geometry.hpp"
#include "meanret/rng.hpp"
#include "meanret/semigroup.hpp"

namespace meanret {

/// Closed nonempty target set for the distance-scaled perturbation family:
/// either a convex body or an explicit finite list of points.
class FixedSet {
 public:
  static FixedSet from_body(ConvexBody body);
  static FixedSet from_points(std::vector<Vector> points);

  int dimension() const;
  double distance(const Vector& x) const;
  Vector nearest(const Vector& x) const;
  Vector sample(Rng& rng) const;
  bool contains(const Vector& x, double tol = 1e-9) const;
  bool is_body() const { return body_.has_value(); }
  const ConvexBody& body() const;
  const std::vector<Vector>& points() const { return points_; }

 private:
  FixedSet() = default;
  std::optional<ConvexBody> body_;
  std::vector<Vector> points_;
};

/// An action of a finite semigroup, or of the naturals {1, 2, ...} under
/// addition, by uniformly Lipschitz self-maps of a convex body.
///
/// `declared_k` is the uniform Lipschitz constant the family asserts.  For
/// the linear families it is computed exactly from singular values and
/// `k_is_analytic()` is true; the distance-perturbation family has no closed
/// form, so its constructor reports the empirical supremum over a power
/// window and marks the bound as empirical.
///
/// Finite linear families memoize all element matrices eagerly; actions of
/// the naturals evaluate T^n by repeated composition (closed form for the
/// contraction family).
class LipschitzAction {
 public:
  enum class IndexSet { Finite, Naturals };

  /// Z_2 action {id, A} for an involutive matrix A (|A^2 - I| <= 1e-10).
  /// The body must be invariant under A (checked on samples).
  static LipschitzAction involution(Matrix a, ConvexBody body);

  /// Z_n action by A = conjugator * generator * conjugator^-1 where
  /// generator^n = I.  declared_k is the exact maximum of |A^m| over the n
  /// memoized powers.
  static LipschitzAction cyclic_linear(const Matrix& conjugator,
                                       const Matrix& generator, int order,
                                       ConvexBody body);

  /// Naturals action generated by the strict contraction
  /// T x = p + ratio (x - p), ratio in [0, 1).  Fixed point set {p}.
  static LipschitzAction contraction(Vector p, double ratio, ConvexBody body);

  /// Naturals action generated by T x = x + eps dist(x, F) (anchor - x) for
  /// an anchor in F.  Fix T = F exactly: the perturbation vanishes on F and
  /// nowhere else.  Requires eps * diameter <= 1 so T maps the body into
  /// itself (T x is a convex combination of x and the anchor).
  static LipschitzAction dist_perturbation(FixedSet f, Vector anchor,
                                           double eps, ConvexBody body,
                                           int window = 50);

  /// Escape hatch for arbitrary finite actions (used for fault injection in
  /// tests as much as anything).  declared_k is taken on trust.
  static LipschitzAction custom(
      FiniteSemigroup s, ConvexBody body,
      std::function<Vector(int, const Vector&)> eval, double declared_k,
      std::string family,
      std::function<Vector(Rng&)> fixed_sampler = nullptr);

  IndexSet index_set() const { return index_; }
  bool over_naturals() const { return index_ == IndexSet::Naturals; }
  const FiniteSemigroup& semigroup() const;
  const ConvexBody& domain() const { return body_; }
  double declared_k() const { return k_; }
  bool k_is_analytic() const { return analytic_; }
  const std::string& family() const { return family_; }

  /// Power window used for sampling checks on naturals actions.
  int window() const { return window_; }

  /// T_t x.  Finite actions index elements 0..n-1; naturals actions take the
  /// exponent t >= 1.
  Vector apply(int t, const Vector& x) const;

  /// Generator step T^1 for naturals actions.
  Vector step(const Vector& x) const;

  bool has_fixed_point_sampler() const { return static_cast<bool>(fixed_sampler_); }
  Vector sample_fixed_point(Rng& rng) const;

 private:
  LipschitzAction() = default;
  void check_domain_invariance() const;

  IndexSet index_ = IndexSet::Finite;
  std::optional<FiniteSemigroup> semigroup_;
  ConvexBody body_ = ConvexBody::ball(Vector::Ones(1), 1.0);
  std::function<Vector(int, const Vector&)> eval_;
  std::function<Vector(const Vector&)> step_;
  std::function<Vector(int, const Vector&)> power_;  // closed form, optional
  std::function<Vector(Rng&)> fixed_sampler_;
  double k_ = 1.0;
  bool analytic_ = true;
  std::string family_;
  int window_ = 64;
};

/// Empirical lower bound for the uniform Lipschitz constant: the largest
/// ratio |T_t x - T_t y| / |x - y| over sampled pairs and all elements (or a
/// full window sweep for naturals).  When the declared constant is analytic,
/// exceeding it beyond 1e-9 throws std::logic_error; an empirical
/// declaration is informational only.
double estimate_uniform_lipschitz(const LipschitzAction& action, int samples,
                                  std::uint64_t seed);

/// Worst defect |T_{st} x - T_s(T_t x)| over sampled triples (exponent pairs
/// for naturals).  Zero, up to rounding, for a genuine action.
double check_homomorphism(const LipschitzAction& action, int samples,
                          std::uint64_t seed);

}  // namespace meanret
