#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "meanret/action.hpp"
#include "meanret/mean.hpp"

namespace meanret {

/// Record of one averaged-map iteration x_{n+1} = Tbar x_n.
///
/// iterates holds x_0..x_N, gaps the step norms |x_{n+1} - x_n| (one fewer
/// entry), residuals the mean-weighted squared displacement of every
/// iterate.  A start that is already fixed collapses to a single-entry
/// trace with no gaps.
struct RetractionTrace {
  std::vector<Vector> iterates;
  std::vector<double> gaps;
  std::vector<double> residuals;
  Vector limit;
  bool converged = false;
  int iterations_used = 0;
};

/// Tbar x = sum_t mu_t T_t x.  A convex combination of points of the body,
/// and declared_k-Lipschitz whenever the action is.
Vector averaged_map(const LipschitzAction& action, const Mean& mu, const Vector& x);

/// r(x) = sum_t mu_t |T_t x - x|^2.  Vanishes exactly on common fixed
/// points.  For an exact invariant mean and uniform constant k the iteration
/// contracts it: r(x_{n+1}) <= (k^2 - 1) r(x_n), which drives the gap decay
/// |x_{n+1} - x_n|^2 <= 4 (k^2 - 1)^n diam(C)^2 (squared diameter keeps the
/// two sides dimensionally consistent).
double residual(const LipschitzAction& action, const Mean& mu, const Vector& x);

/// Iterates the averaged map from x0 until the step gap falls below tol or
/// max_iter steps were taken.  Every iterate is projected back onto the
/// body (an identity up to rounding) so accumulated arithmetic drift cannot
/// escape the domain.  A non-finite iterate aborts with the offending index
/// in the message.
RetractionTrace iterate_retraction(const LipschitzAction& action, const Mean& mu,
                                   const Vector& x0, double tol, int max_iter);

/// 2x the guaranteed iteration count when theory applies (exact mean,
/// 1 < k < sqrt(2)); a fixed fallback of 1000 otherwise.
int default_max_iterations(const LipschitzAction& action, const Mean& mu, double tol);

/// The limit map R x = lim Tbar^n x as a reusable function object.
class Retraction {
 public:
  Retraction(LipschitzAction action, Mean mu, double tol, int max_iter);
  Vector operator()(const Vector& x) const;
  const LipschitzAction& action() const { return action_; }
  const Mean& mean() const { return mu_; }

 private:
  LipschitzAction action_;
  Mean mu_;
  double tol_;
  int max_iter_;
};

/// Sampled check of the retraction identities.
struct VerificationReport {
  double max_action_defect = 0.0;      // |T_s(R x) - R x|
  double max_idempotence_defect = 0.0; // |R(R x) - R x|
  double max_fixed_identity_defect = 0.0;  // |R f - f| on sampled fixed points
  double mean_defect = 0.0;            // invariance defect of the mean used
  double allowance = 0.0;              // tol (1 + mean defect * diam^2)
  int samples = 0;
  int fixed_samples = 0;
  bool pass = false;
};

/// Verifies T_s o R = R, R o R = R and R|Fix = id on sampled points.  The
/// pass threshold widens with the mean's invariance defect, so failures
/// under approximate means stay attributable.
VerificationReport verify_retraction(const Retraction& r, int samples,
                                     std::uint64_t seed, double tol);

/// CSV rows n, gap, residual, coordinates (gap blank on the last row).
void write_trace_csv(std::ostream& os, const RetractionTrace& trace);

/// Compact JSON string: converged, iterations_used, limit, final gap and
/// residual.  Identical traces serialize to identical bytes.
std::string trace_summary_json(const RetractionTrace& trace);

}  // namespace meanret
