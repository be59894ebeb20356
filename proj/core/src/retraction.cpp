#include "meanret/retraction.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "meanret/analysis.hpp"

namespace meanret {
namespace {

void check_compatible(const LipschitzAction& action, const Mean& mu) {
  if (!action.over_naturals() &&
      mu.weights.size() != action.semigroup().size()) {
    throw std::invalid_argument("mean does not index the semigroup elements");
  }
  if (action.over_naturals() && mu.weights.size() < 1) {
    throw std::invalid_argument("mean window is empty");
  }
}

// Detects starts that are already fixed by Tbar; far below any practical
// stopping tolerance.
double fixed_start_eps(const Vector& x0) { return 1e-13 * (1.0 + x0.norm()); }

}  // namespace

Vector averaged_map(const LipschitzAction& action, const Mean& mu, const Vector& x) {
  check_compatible(action, mu);
  const Vector& w = mu.weights;
  Vector acc = Vector::Zero(x.size());
  if (!action.over_naturals()) {
    for (int t = 0; t < w.size(); ++t) acc += w(t) * action.apply(t, x);
  } else {
    Vector cur = x;
    for (int n = 0; n < w.size(); ++n) {
      cur = action.step(cur);
      acc += w(n) * cur;
    }
  }
  return acc;
}

double residual(const LipschitzAction& action, const Mean& mu, const Vector& x) {
  check_compatible(action, mu);
  const Vector& w = mu.weights;
  double r = 0.0;
  if (!action.over_naturals()) {
    for (int t = 0; t < w.size(); ++t) {
      r += w(t) * (action.apply(t, x) - x).squaredNorm();
    }
  } else {
    Vector cur = x;
    for (int n = 0; n < w.size(); ++n) {
      cur = action.step(cur);
      r += w(n) * (cur - x).squaredNorm();
    }
  }
  return r;
}

RetractionTrace iterate_retraction(const LipschitzAction& action, const Mean& mu,
                                   const Vector& x0, double tol, int max_iter) {
  check_compatible(action, mu);
  if (!(tol > 0)) throw std::invalid_argument("iterate_retraction: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("iterate_retraction: max_iter must be >= 1");
  const ConvexBody& body = action.domain();
  if (!body.contains(x0, 1e-9 * (1.0 + body.diameter()))) {
    throw std::invalid_argument("iterate_retraction: start lies outside the body");
  }

  RetractionTrace trace;
  trace.iterates.push_back(x0);
  trace.residuals.push_back(residual(action, mu, x0));

  Vector x = x0;
  for (int it = 0; it < max_iter; ++it) {
    Vector mapped = averaged_map(action, mu, x);
    if (!mapped.allFinite()) {
      throw std::runtime_error(
          "iterate_retraction: non-finite iterate at step " + std::to_string(it + 1));
    }
    Vector next = body.project(mapped);
    const double gap = (next - x).norm();

    if (it == 0 && gap <= fixed_start_eps(x0)) {
      trace.limit = x0;
      trace.converged = true;
      trace.iterations_used = 0;
      return trace;
    }

    trace.iterates.push_back(next);
    trace.gaps.push_back(gap);
    trace.residuals.push_back(residual(action, mu, next));
    x = std::move(next);
    if (gap <= tol) {
      trace.converged = true;
      break;
    }
  }

  trace.limit = trace.iterates.back();
  trace.iterations_used = static_cast<int>(trace.iterates.size()) - 1;
  return trace;
}

int default_max_iterations(const LipschitzAction& action, const Mean& mu, double tol) {
  const double k = action.declared_k();
  if (mu.exact && k > 1.0 && k * k < 2.0) {
    const int n = min_iterations(tol, k, action.domain().diameter());
    return std::max(8, 2 * n);
  }
  return 1000;
}

Retraction::Retraction(LipschitzAction action, Mean mu, double tol, int max_iter)
    : action_(std::move(action)), mu_(std::move(mu)), tol_(tol), max_iter_(max_iter) {
  check_compatible(action_, mu_);
  if (!(tol > 0) || max_iter < 1) {
    throw std::invalid_argument("Retraction: bad tolerance or iteration cap");
  }
}

Vector Retraction::operator()(const Vector& x) const {
  return iterate_retraction(action_, mu_, x, tol_, max_iter_).limit;
}

VerificationReport verify_retraction(const Retraction& r, int samples,
                                     std::uint64_t seed, double tol) {
  if (samples < 1) throw std::invalid_argument("verify_retraction: samples >= 1");
  const LipschitzAction& action = r.action();
  const ConvexBody& body = action.domain();
  const double diam = body.diameter();

  VerificationReport rep;
  rep.samples = samples;
  rep.mean_defect = r.mean().defect;
  rep.allowance = tol * (1.0 + rep.mean_defect * diam * diam);

  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vector x = body.sample(rng);
    const Vector rx = r(x);

    if (!action.over_naturals()) {
      for (int t = 0; t < action.semigroup().size(); ++t) {
        rep.max_action_defect =
            std::max(rep.max_action_defect, (action.apply(t, rx) - rx).norm());
      }
    } else {
      Vector cur = rx;
      const int window = static_cast<int>(r.mean().weights.size());
      for (int n = 1; n <= window; ++n) {
        cur = action.step(cur);
        rep.max_action_defect = std::max(rep.max_action_defect, (cur - rx).norm());
      }
    }

    rep.max_idempotence_defect =
        std::max(rep.max_idempotence_defect, (r(rx) - rx).norm());

    if (action.has_fixed_point_sampler()) {
      const Vector f = action.sample_fixed_point(rng);
      rep.max_fixed_identity_defect =
          std::max(rep.max_fixed_identity_defect, (r(f) - f).norm());
      ++rep.fixed_samples;
    }
  }

  rep.pass = rep.max_action_defect <= rep.allowance &&
             rep.max_idempotence_defect <= rep.allowance &&
             rep.max_fixed_identity_defect <= rep.allowance;
  return rep;
}

void write_trace_csv(std::ostream& os, const RetractionTrace& trace) {
  const Eigen::Index dim = trace.iterates.empty() ? 0 : trace.iterates.front().size();
  os << "n,gap,residual";
  for (Eigen::Index j = 0; j < dim; ++j) os << ",x_" << j;
  os << "\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t n = 0; n < trace.iterates.size(); ++n) {
    line.str("");
    line << n << ",";
    if (n < trace.gaps.size()) line << trace.gaps[n];
    line << "," << trace.residuals[n];
    for (Eigen::Index j = 0; j < dim; ++j) line << "," << trace.iterates[n](j);
    os << line.str() << "\n";
  }
}

std::string trace_summary_json(const RetractionTrace& trace) {
  nlohmann::json j;
  j["converged"] = trace.converged;
  j["iterations_used"] = trace.iterations_used;
  std::vector<double> limit(trace.limit.data(), trace.limit.data() + trace.limit.size());
  j["limit"] = limit;
  j["final_gap"] = trace.gaps.empty() ? 0.0 : trace.gaps.back();
  j["final_residual"] = trace.residuals.empty() ? 0.0 : trace.residuals.back();
  return j.dump();
}

}  // namespace meanret
