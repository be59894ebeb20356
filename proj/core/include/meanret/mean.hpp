#pragma once

#include <optional>

#include "meanret/lp.hpp"
#include "meanret/semigroup.hpp"

namespace meanret {

/// A finitely supported mean: nonnegative weights summing to one, indexed
/// either by the elements of a finite semigroup or by a window {1..N} of the
/// naturals.  `defect` is the worst l1 distance between the mean and any of
/// its left translates; `exact` marks defects at solver tolerance.
struct Mean {
  Vector weights;
  double defect = 0.0;
  bool exact = false;
};

/// Left-invariance defect max_s |L_s^* w - w|_1 over all elements of S.
double invariance_defect(const FiniteSemigroup& s, const Vector& weights);

/// Defect of a weight vector on the window {1..N} of the naturals under the
/// generator shift: mass leaving the window counts in full.
double window_invariance_defect(const Vector& weights);

/// Wraps explicit weights as a Mean, computing defect and the exact flag.
Mean mean_on_semigroup(const FiniteSemigroup& s, Vector weights);
Mean mean_on_window(Vector weights);

/// Uniform weights 1/N on the window {1..N}.  The defect against the
/// generator shift is exactly 2/N: 1/N enters at the front and 1/N falls off
/// the end.  Larger windows are flatter; the defect vanishes as N grows.
Mean folner_mean(int window);

struct InvariantMeanResult {
  std::optional<Mean> mean;                       // engaged iff feasible
  std::optional<FeasibilityResult> certificate;   // engaged iff infeasible
  bool feasible() const { return mean.has_value(); }
};

/// Finds a left-invariant mean on S or proves there is none.
///
/// Feasibility of { w >= 0 : L_s^* w = w for all s, sum w = 1 } is decided
/// by a phase-1 simplex; an infeasible system is returned with its Farkas
/// certificate.  A feasible one is canonicalized to the weight vector
/// closest to uniform in l2, computed by Dykstra's alternating projections
/// between the invariance subspace and the nonnegative orthant, so the
/// output is deterministic even when invariant means form a continuum.
InvariantMeanResult solve_left_invariant_mean(const FiniteSemigroup& s);

}  // namespace meanret
