#include "meanret/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "meanret/rng.hpp"

namespace meanret {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_strict_range(double k) {
  if (!(k > 1.0) || !(k < kSqrt2)) {
    throw std::invalid_argument("k must lie strictly between 1 and sqrt(2)");
  }
}

double percentile(std::vector<double>& v, double p) {
  std::sort(v.begin(), v.end());
  const double idx = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = idx - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

double holder_exponent(double k) {
  require_strict_range(k);
  const double gamma = k * k - 1.0;
  return 1.0 / (1.0 - std::log(k) / std::log(gamma));
}

double holder_constant(double k, double diam_c) {
  if (k * k >= 2.0) throw std::invalid_argument("holder_constant: k^2 must be < 2");
  if (!(k > 1.0)) throw std::invalid_argument("holder_constant: k must exceed 1");
  if (!(diam_c >= 0) || !std::isfinite(diam_c)) {
    throw std::invalid_argument("holder_constant: diameter must be nonnegative");
  }
  const double c = k + 8.0 * diam_c / (2.0 - k * k);
  if (c > 1e15) return std::numeric_limits<double>::infinity();
  return c;
}

HolderEstimate check_holder(const std::function<Vector(const Vector&)>& r,
                            const ConvexBody& body, double k, int pairs,
                            std::uint64_t seed) {
  require_strict_range(k);
  if (pairs < 1) throw std::invalid_argument("check_holder: pairs must be >= 1");
  const double diam = body.diameter();

  HolderEstimate est;
  est.alpha_theory = holder_exponent(k);
  est.c_theory = holder_constant(k, diam);

  Rng rng(seed);
  std::vector<double> logd, logrd;
  for (int i = 0; i < pairs; ++i) {
    const Vector x = body.sample(rng);
    const Vector y = body.sample(rng);
    const double d = (x - y).norm();
    if (d < 1e-14) continue;  // duplicate draw, nothing to test
    const double rd = (r(x) - r(y)).norm();
    const double ratio =
        rd / (est.c_theory * std::pow(d / diam, est.alpha_theory));
    est.worst_ratio = std::max(est.worst_ratio, ratio);
    ++est.pairs_tested;
    if (rd > 1e-300) {
      logd.push_back(std::log(d / diam));
      logrd.push_back(std::log(rd));
    }
  }

  // Upper envelope: bin by log distance, take the 95th percentile of the
  // image distances per bin, then fit a line through the envelope points.
  est.alpha_empirical = std::numeric_limits<double>::quiet_NaN();
  if (logd.size() >= 20) {
    std::vector<std::size_t> order(logd.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return logd[a] < logd[b]; });
    const std::size_t nbins =
        std::clamp<std::size_t>(logd.size() / 50, 5, 40);
    const std::size_t per = order.size() / nbins;
    std::vector<double> bx, by;
    for (std::size_t b = 0; b < nbins; ++b) {
      const std::size_t begin = b * per;
      const std::size_t end = (b + 1 == nbins) ? order.size() : begin + per;
      if (end - begin < 3) continue;
      std::vector<double> xs, ys;
      for (std::size_t i = begin; i < end; ++i) {
        xs.push_back(logd[order[i]]);
        ys.push_back(logrd[order[i]]);
      }
      std::vector<double> xs_med = xs;
      bx.push_back(percentile(xs_med, 0.5));
      by.push_back(percentile(ys, 0.95));
    }
    if (bx.size() >= 2) est.alpha_empirical = ls_slope(bx, by);
  }
  return est;
}

std::optional<double> decay_rate_fit(const RetractionTrace& trace) {
  std::vector<double> idx, logr;
  for (std::size_t n = 0; n < trace.residuals.size(); ++n) {
    if (trace.residuals[n] > 0.0) {
      idx.push_back(static_cast<double>(n));
      logr.push_back(std::log(trace.residuals[n]));
    }
  }
  if (idx.size() < 4) return std::nullopt;
  const double slope = ls_slope(idx, logr);
  if (!std::isfinite(slope)) return std::nullopt;
  return std::exp(slope);
}

double hilbert_modulus(double eps) {
  if (!(eps >= 0.0 && eps <= 2.0)) {
    throw std::invalid_argument("hilbert_modulus: eps must lie in [0, 2]");
  }
  return 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
}

double goebel_kirk_threshold() {
  const auto gk = [](double k) {
    return k * (1.0 - hilbert_modulus(1.0 / k)) - 1.0;
  };
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gk(mid) < 0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double lifschitz_threshold() { return kSqrt2; }

int min_iterations(double tol, double k, double diam_c) {
  if (!(tol > 0)) throw std::invalid_argument("min_iterations: tol must be positive");
  if (!(diam_c > 0)) throw std::invalid_argument("min_iterations: diameter must be positive");
  require_strict_range(k);
  const double bound0 = 4.0 * diam_c * diam_c;
  if (bound0 <= tol * tol) return 0;
  const double gamma = k * k - 1.0;
  double n = std::ceil(std::log(tol * tol / bound0) / std::log(gamma));
  // Guard the ceiling against rounding in the logs.
  while (n > 0 && bound0 * std::pow(gamma, n - 1) <= tol * tol) n -= 1;
  while (bound0 * std::pow(gamma, n) > tol * tol) n += 1;
  return static_cast<int>(n);
}

}  // namespace meanret
