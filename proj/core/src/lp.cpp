#include "meanret/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace meanret {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasibleTol = 1e-10;
constexpr int kMaxPivots = 200000;

}  // namespace

FeasibilityResult phase_one_feasibility(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("phase_one_feasibility: row count mismatch");
  }
  const int n = static_cast<int>(a.cols());
  const int m_all = static_cast<int>(a.rows());

  // Normalize to rhs >= 0 and drop identically zero rows.  A zero row with a
  // nonzero rhs is an immediate contradiction certified by a coordinate
  // vector.
  std::vector<int> rows;
  std::vector<double> sign;
  for (int i = 0; i < m_all; ++i) {
    const double rmax = a.row(i).cwiseAbs().maxCoeff();
    if (rmax <= 1e-14) {
      if (std::abs(b(i)) > 1e-12) {
        FeasibilityResult res;
        res.feasible = false;
        res.infeasibility = std::abs(b(i));
        res.farkas = Vector::Zero(m_all);
        res.farkas(i) = b(i) > 0 ? 1.0 : -1.0;
        return res;
      }
      continue;
    }
    rows.push_back(i);
    sign.push_back(b(i) >= 0 ? 1.0 : -1.0);
  }
  const int m = static_cast<int>(rows.size());

  if (m == 0) {
    FeasibilityResult res;
    res.feasible = true;
    res.point = Vector::Zero(n);
    return res;
  }

  // Tableau over columns [x | artificials], one artificial per row, basis
  // initially the artificials.  Phase-1 objective: minimize their sum.
  Matrix t(m, n + m);
  Vector rhs(m);
  for (int i = 0; i < m; ++i) {
    t.row(i).head(n) = sign[i] * a.row(rows[i]);
    t.row(i).tail(m).setZero();
    t(i, n + i) = 1.0;
    rhs(i) = sign[i] * b(rows[i]);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced cost row for cost c = (0,...,0, 1,...,1) with artificial basis.
  Eigen::RowVectorXd red = Eigen::RowVectorXd::Zero(n + m);
  red.tail(m).setOnes();
  for (int i = 0; i < m; ++i) red -= t.row(i);
  double obj = rhs.sum();

  for (int pivots = 0; pivots < kMaxPivots; ++pivots) {
    // Bland: smallest-index column with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (red(j) < -kPivotTol) { enter = j; break; }
    }
    if (enter < 0) break;

    int leave = -1;
    double best = 0;
    for (int i = 0; i < m; ++i) {
      if (t(i, enter) > kPivotTol) {
        const double ratio = rhs(i) / t(i, enter);
        if (leave < 0 || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) {
      // Phase-1 objective is bounded below by zero, so an unbounded ray
      // signals numerical corruption.
      throw std::runtime_error("phase_one_feasibility: unbounded phase-1");
    }

    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    rhs(leave) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0) {
        t.row(i) -= f * t.row(leave);
        rhs(i) -= f * rhs(leave);
      }
    }
    const double fr = red(enter);
    red -= fr * t.row(leave);
    obj -= fr * rhs(leave);
    basis[leave] = enter;

    if (pivots == kMaxPivots - 1) {
      throw std::runtime_error("phase_one_feasibility: pivot cap exceeded");
    }
  }

  FeasibilityResult res;
  obj = 0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) obj += rhs(i);
  }
  res.infeasibility = obj;

  if (obj <= kFeasibleTol) {
    res.feasible = true;
    res.point = Vector::Zero(n);
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n) res.point(basis[i]) = rhs(i);
    }
    return res;
  }

  // Simplex multipliers: the reduced cost of artificial i is 1 - y_i in the
  // scaled system; fold the row signs back in for the original one.
  res.feasible = false;
  res.farkas = Vector::Zero(m_all);
  for (int i = 0; i < m; ++i) {
    res.farkas(rows[i]) = sign[i] * (1.0 - red(n + i));
  }
  return res;
}

}  // namespace meanret
