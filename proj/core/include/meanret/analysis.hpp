#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "meanret/geometry.hpp"
#include "meanret/retraction.hpp"

namespace meanret {

/// Holder exponent of the retraction for uniform constant k in (1, sqrt(2)):
/// alpha = 1 / (1 - log_{k^2-1} k), the largest exponent compatible with the
/// geometric gap decay at ratio k^2 - 1.  Tends to 1 as k -> 1+ and to 0 as
/// k -> sqrt(2)-.
double holder_exponent(double k);

/// Matching constant c = k + 8 diam(C) / (2 - k^2) in original length units.
/// Blows up at the sqrt(2) pole; values beyond 1e15 are reported as
/// infinity.
double holder_constant(double k, double diam_c);

struct HolderEstimate {
  double alpha_theory = 0.0;
  double c_theory = 0.0;
  double alpha_empirical = 0.0;  // slope of the upper-envelope log-log fit
  double worst_ratio = 0.0;      // max |Rx - Ry| / (c (|x - y|/diam)^alpha)
  int pairs_tested = 0;
};

/// Samples point pairs and compares |R x - R y| against the Holder envelope.
/// Distances are normalized by diam(C) before the exponent is applied and c
/// is applied in original units, so worst_ratio <= 1 means the bound holds.
/// The empirical exponent is the least-squares slope through the binned
/// 95th-percentile envelope of the log-log scatter, which tracks the
/// worst-case growth rather than the average.
HolderEstimate check_holder(const std::function<Vector(const Vector&)>& r,
                            const ConvexBody& body, double k, int pairs,
                            std::uint64_t seed);

/// Fits log residual against iteration index by least squares and returns
/// the geometric decay ratio exp(slope).  Requires at least four positive
/// residuals; otherwise the trace is not fittable and nullopt is returned.
std::optional<double> decay_rate_fit(const RetractionTrace& trace);

/// Modulus of convexity of a Hilbert space: delta(eps) = 1 - sqrt(1 -
/// eps^2/4) on [0, 2].
double hilbert_modulus(double eps);

/// Root of k (1 - delta(1/k)) = 1 on (1, 2), solved by bisection to 1e-12:
/// the classical fixed-point threshold sqrt(5)/2 for uniformly Lipschitz
/// actions in Hilbert space.
double goebel_kirk_threshold();

/// The larger threshold sqrt(2) below which the averaged-map retraction
/// construction applies.
double lifschitz_threshold();

/// Smallest n with 4 (k^2 - 1)^n diam^2 <= tol^2: after n steps the gap
/// bound guarantees steps below tol.  Zero when tol >= 2 diam.
int min_iterations(double tol, double k, double diam_c);

}  // namespace meanret
