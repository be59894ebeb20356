#pragma once

#include "meanret/geometry.hpp"

namespace meanret {

/// Outcome of a phase-1 feasibility solve for { x >= 0 : A x = b }.
///
/// When infeasible, `farkas` holds a certificate y with A^T y <= 0
/// componentwise and b^T y > 0, recovered from the optimal simplex
/// multipliers; `infeasibility` is the phase-1 optimum (the smallest
/// attainable l1 residual of the artificial variables).
struct FeasibilityResult {
  bool feasible = false;
  Vector point;
  Vector farkas;
  double infeasibility = 0.0;
};

/// Dense phase-1 simplex with Bland's rule.  Intended for the small systems
/// produced by invariance constraints (tens of variables); throws
/// std::runtime_error if the pivot cap is hit.
FeasibilityResult phase_one_feasibility(const Matrix& a, const Vector& b);

}  // namespace meanret
