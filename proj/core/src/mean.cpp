#include "meanret/mean.hpp"

#include <cmath>
#include <stdexcept>

namespace meanret {
namespace {

constexpr double kExactDefect = 1e-9;
constexpr double kWeightFloor = -1e-14;

void check_mean_invariants(const Vector& w) {
  if (!w.allFinite()) throw std::invalid_argument("mean: non-finite weights");
  if (w.minCoeff() < kWeightFloor) {
    throw std::invalid_argument("mean: negative weight beyond tolerance");
  }
  if (std::abs(w.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("mean: weights do not sum to one");
  }
}

// Stacked equality system M w = c for left invariance plus total mass one.
void build_invariance_system(const FiniteSemigroup& s, Matrix& m, Vector& c) {
  const int n = s.size();
  m.resize(static_cast<Eigen::Index>(n) * n + 1, n);
  c.resize(m.rows());
  for (int e = 0; e < n; ++e) {
    m.block(static_cast<Eigen::Index>(e) * n, 0, n, n) =
        s.left_translation_adjoint(e) - Matrix::Identity(n, n);
  }
  m.row(m.rows() - 1).setOnes();
  c.setZero();
  c(c.size() - 1) = 1.0;
}

}  // namespace

double invariance_defect(const FiniteSemigroup& s, const Vector& weights) {
  if (weights.size() != s.size()) {
    throw std::invalid_argument("invariance_defect: weight count mismatch");
  }
  double worst = 0.0;
  for (int e = 0; e < s.size(); ++e) {
    const double d =
        (s.left_translation_adjoint(e) * weights - weights).lpNorm<1>();
    worst = std::max(worst, d);
  }
  return worst;
}

double window_invariance_defect(const Vector& weights) {
  const Eigen::Index n = weights.size();
  if (n == 0) throw std::invalid_argument("window_invariance_defect: empty");
  // The shifted vector lives on {2..N+1}; compare on the union of supports.
  double d = std::abs(weights(0));
  for (Eigen::Index u = 1; u < n; ++u) d += std::abs(weights(u - 1) - weights(u));
  d += std::abs(weights(n - 1));
  return d;
}

Mean mean_on_semigroup(const FiniteSemigroup& s, Vector weights) {
  check_mean_invariants(weights);
  Mean m;
  m.weights = std::move(weights);
  m.defect = invariance_defect(s, m.weights);
  m.exact = m.defect <= kExactDefect;
  return m;
}

Mean mean_on_window(Vector weights) {
  check_mean_invariants(weights);
  Mean m;
  m.weights = std::move(weights);
  m.defect = window_invariance_defect(m.weights);
  m.exact = false;  // windows only approximate invariance
  return m;
}

Mean folner_mean(int window) {
  if (window < 1) throw std::invalid_argument("folner_mean: window must be >= 1");
  Mean m;
  m.weights = Vector::Constant(window, 1.0 / window);
  m.defect = 2.0 / window;
  m.exact = false;
  return m;
}

InvariantMeanResult solve_left_invariant_mean(const FiniteSemigroup& s) {
  const int n = s.size();
  Matrix m;
  Vector c;
  build_invariance_system(s, m, c);

  InvariantMeanResult result;
  FeasibilityResult feas = phase_one_feasibility(m, c);
  if (!feas.feasible) {
    result.certificate = std::move(feas);
    return result;
  }

  // Canonicalize: project the uniform vector onto the feasible polytope
  // (affine invariance set intersected with the orthant) with Dykstra's
  // scheme.  The affine projection reuses one pseudoinverse.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m);
  const Matrix pinv = cod.pseudoInverse();
  const auto project_affine = [&](const Vector& v) -> Vector {
    return v - pinv * (m * v - c);
  };

  const Vector uniform = Vector::Constant(n, 1.0 / n);
  Vector x = uniform;
  Vector p = Vector::Zero(n);
  Vector q = Vector::Zero(n);
  for (int it = 0; it < 50000; ++it) {
    const Vector y = project_affine(x + p);
    p = x + p - y;
    const Vector xn = (y + q).cwiseMax(0.0);
    q = y + q - xn;
    const double drift = (xn - x).lpNorm<Eigen::Infinity>();
    x = xn;
    if (drift <= 1e-16 && (m * x - c).lpNorm<Eigen::Infinity>() <= 1e-13) break;
  }

  Vector w = x;
  if ((m * w - c).lpNorm<Eigen::Infinity>() > 1e-10 || w.minCoeff() < kWeightFloor) {
    w = feas.point;  // deterministic feasible vertex as fallback
  }
  const double total = w.sum();
  if (!(total > 0)) throw std::runtime_error("solve_left_invariant_mean: degenerate weights");
  w /= total;

  result.mean = mean_on_semigroup(s, std::move(w));
  return result;
}

}  // namespace meanret
