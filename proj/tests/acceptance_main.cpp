// Acceptance gate: ten numbered criteria, one PASS/FAIL line each.  The
// binary exits 0 only if every criterion passes.  Reference quantities come
// from tests/support/oracles.hpp (closed forms, brute force, direct
// summation), never from the code paths under test.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <meanret/action.hpp>
#include <meanret/analysis.hpp>
#include <meanret/geometry.hpp>
#include <meanret/mean.hpp>
#include <meanret/retraction.hpp>
#include <meanret/rng.hpp>
#include <meanret/semigroup.hpp>

#include "config.hpp"
#include "oracles.hpp"

using namespace meanret;

namespace {

const std::string kConfigDir = MEANRET_CONFIG_DIR;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

/// Collects requirements for one criterion; the first failure wins the
/// reported detail line.
struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = "failed: " + what;
    }
  }
  void note(const std::string& s) {
    if (ok) detail = s;
  }
};

cli::ExperimentConfig shipped(const std::string& name) {
  return cli::load_config(kConfigDir + "/" + name + ".json");
}

Mean uniform_z2_mean() {
  return mean_on_semigroup(FiniteSemigroup::cyclic(2), Vector::Constant(2, 0.5));
}

/// Builds the shipped scenario's action, mean and retraction in one go.
struct BuiltScenario {
  cli::ExperimentConfig cfg;
  LipschitzAction action;
  Mean mu;
  int max_iter;
};

BuiltScenario build_scenario(const std::string& name) {
  cli::ExperimentConfig cfg = shipped(name);
  const cli::ResolvedSemigroup sg =
      cli::resolve_semigroup(cfg.semigroup_spec, cfg.base_dir);
  LipschitzAction action = cli::build_action(cfg, sg);
  InvariantMeanResult res = cli::build_mean(cfg, sg);
  if (!res.feasible())
    throw std::runtime_error(name + ": no invariant mean");
  const int max_iter = cfg.max_iter
                           ? *cfg.max_iter
                           : default_max_iterations(action, *res.mean, cfg.tol);
  return {std::move(cfg), std::move(action), std::move(*res.mean), max_iter};
}

// --- criterion 1: thresholds and the convexity modulus ---------------------

Check c1_thresholds() {
  Check c;
  const double gk = goebel_kirk_threshold();
  c.require(std::abs(gk - std::sqrt(5.0) / 2.0) <= 1e-9,
            "uniform-convexity threshold vs sqrt(5)/2");
  c.require(std::abs(lifschitz_threshold() - std::sqrt(2.0)) <= 1e-12,
            "retraction threshold vs sqrt(2)");
  double worst = 0.0;
  for (const double eps : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75}) {
    worst = std::max(worst, std::abs(hilbert_modulus(eps) -
                                     oracles::modulus_bruteforce(eps)));
  }
  c.require(worst <= 1e-4, "modulus vs 2-D brute-force minimization");
  c.note(fmt("thresholds exact, worst modulus deviation %.2e", worst));
  return c;
}

// --- criterion 2: invariant-mean solver ------------------------------------

Check c2_mean_solver() {
  Check c;
  double worst_uniform = 0.0, worst_defect = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const InvariantMeanResult res =
        solve_left_invariant_mean(FiniteSemigroup::cyclic(n));
    c.require(res.feasible(), fmt("cyclic group of order %d is amenable", n));
    if (!res.feasible()) continue;
    for (int i = 0; i < n; ++i)
      worst_uniform =
          std::max(worst_uniform, std::abs(res.mean->weights(i) - 1.0 / n));
    worst_defect = std::max(worst_defect, res.mean->defect);
  }
  c.require(worst_uniform <= 1e-9, "solver mean is uniform on cyclic groups");
  c.require(worst_defect <= 1e-9, "cyclic-group mean defect <= 1e-9");

  for (int n = 2; n <= 5; ++n) {
    const InvariantMeanResult res =
        solve_left_invariant_mean(FiniteSemigroup::left_zero(n));
    c.require(!res.feasible(), fmt("left-zero size %d must be infeasible", n));
    c.require(res.certificate.has_value() &&
                  res.certificate->infeasibility > 1e-12,
              fmt("left-zero size %d must carry a certificate", n));
  }

  Rng rng(20260822);
  double worst_random = 0.0;
  for (int t = 0; t < 50; ++t) {
    const FiniteSemigroup s =
        FiniteSemigroup::from_table({}, oracles::commutative_random_table(rng));
    const InvariantMeanResult res = solve_left_invariant_mean(s);
    c.require(res.feasible(), fmt("commutative table %d is amenable", t));
    if (res.feasible())
      worst_random = std::max(worst_random, res.mean->defect);
  }
  c.require(worst_random <= 1e-9, "random commutative mean defect <= 1e-9");
  c.note(fmt("uniform dev %.2e, cyclic defect %.2e, random defect %.2e",
             worst_uniform, worst_defect, worst_random));
  return c;
}

// --- criteria 3 and 4: residual contraction and gap decay ------------------

struct TraceMargins {
  double residual = -std::numeric_limits<double>::infinity();
  double gap = -std::numeric_limits<double>::infinity();
  int traces = 0;
  int steps = 0;
};

/// One sweep over 20 random shear scenarios x 20 starts feeds both the
/// residual-chain criterion and the gap-envelope criterion.
const TraceMargins& shear_trace_margins() {
  static const TraceMargins margins = [] {
    TraceMargins out;
    Rng rng(37);
    const Mean mu = uniform_z2_mean();
    for (int t = 0; t < 20; ++t) {
      const oracles::ShearScenario sc = oracles::random_shear(rng);
      const ConvexBody body = ConvexBody::ellipsoid(sc.shape, 1.0);
      const LipschitzAction act = LipschitzAction::involution(sc.a, body);
      // The closed-form constant is the bound; the engine must agree with it.
      if (std::abs(act.declared_k() - sc.k) > 1e-9)
        throw std::runtime_error("engine Lipschitz constant drifted from the "
                                 "closed form");
      const double gamma = sc.k * sc.k - 1.0;
      const double diam2 = body.diameter() * body.diameter();
      for (int i = 0; i < 20; ++i) {
        const RetractionTrace trace =
            iterate_retraction(act, mu, body.sample(rng), 1e-10, 400);
        for (std::size_t n = 0; n + 1 < trace.residuals.size(); ++n)
          out.residual = std::max(out.residual, trace.residuals[n + 1] -
                                                    gamma * trace.residuals[n]);
        double envelope = 4.0 * diam2;
        for (std::size_t n = 0; n < trace.gaps.size(); ++n) {
          out.gap =
              std::max(out.gap, trace.gaps[n] * trace.gaps[n] - envelope);
          envelope *= gamma;
          ++out.steps;
        }
        ++out.traces;
      }
    }
    return out;
  }();
  return margins;
}

Check c3_residual_contraction() {
  Check c;
  const TraceMargins& m = shear_trace_margins();
  c.require(m.residual <= 1e-9,
            "residual(x_{n+1}) <= (k^2-1) residual(x_n) + 1e-9");
  c.note(fmt("%d traces, worst margin %.2e", m.traces, m.residual));
  return c;
}

Check c4_gap_bound() {
  Check c;
  const TraceMargins& m = shear_trace_margins();
  c.require(m.gap <= 1e-9, "gap_n^2 <= 4 (k^2-1)^n diam^2 + 1e-9");
  c.note(fmt("%d steps, worst margin %.2e", m.steps, m.gap));
  return c;
}

// --- criterion 5: one-step collapse for nonexpansive families --------------

Check c5_one_step_collapse() {
  Check c;
  Rng rng(5150);
  double worst_res = 0.0, worst_fix = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int dim = 2 + static_cast<int>(rng.index(7));
    const int order = i % 2 == 0 ? 2 : 2 + static_cast<int>(rng.index(4));
    const ConvexBody body = ConvexBody::ball(Vector::Zero(dim), 1.0);
    const LipschitzAction act = [&]() -> LipschitzAction {
      if (i % 2 == 0)
        return LipschitzAction::involution(
            oracles::random_orthogonal_involution(dim, rng), body);
      return LipschitzAction::cyclic_linear(
          Matrix::Identity(dim, dim),
          oracles::random_cyclic_isometry(dim, order, rng), order, body);
    }();
    const InvariantMeanResult res =
        solve_left_invariant_mean(FiniteSemigroup::cyclic(order));
    c.require(res.feasible(), "exact mean on the cyclic group");
    if (!res.feasible()) break;

    const Vector x1 = body.project(averaged_map(act, *res.mean, body.sample(rng)));
    worst_res = std::max(worst_res, residual(act, *res.mean, x1));
    for (int s = 0; s < order; ++s)
      worst_fix = std::max(worst_fix, (act.apply(s, x1) - x1).norm());
  }
  c.require(worst_res <= 1e-10, "one averaged step kills the residual");
  c.require(worst_fix <= 1e-9, "the averaged step lands on a common fixed point");
  c.note(fmt("20 isometric actions, residual %.2e, fixed defect %.2e",
             worst_res, worst_fix));
  return c;
}

// --- criterion 6: retraction algebra on every exact-mean scenario ----------

Check c6_retraction_algebra() {
  Check c;
  double worst_action = 0.0, worst_idem = 0.0, worst_fixed = 0.0;
  for (const std::string name :
       {"shear_z2", "orthogonal_z2", "cyclic_z3", "cyclic_z4_exact"}) {
    const BuiltScenario b = build_scenario(name);
    c.require(b.mu.exact, name + " uses an exact invariant mean");
    const Retraction r(b.action, b.mu, b.cfg.tol, b.max_iter);
    const VerificationReport v = verify_retraction(
        r, std::max(100, b.cfg.verify.samples), b.cfg.verify.seed, 1e-6);
    c.require(v.fixed_samples > 0, name + " samples common fixed points");
    worst_action = std::max(worst_action, v.max_action_defect);
    worst_idem = std::max(worst_idem, v.max_idempotence_defect);
    worst_fixed = std::max(worst_fixed, v.max_fixed_identity_defect);
  }
  c.require(worst_action <= 1e-6, "|T_s(Rx) - Rx| <= 1e-6");
  c.require(worst_idem <= 1e-6, "|R(Rx) - Rx| <= 1e-6");
  c.require(worst_fixed <= 1e-6, "|Rf - f| <= 1e-6 on fixed points");
  c.note(fmt("4 scenarios: action %.2e, idempotence %.2e, fixed %.2e",
             worst_action, worst_idem, worst_fixed));
  return c;
}

// --- criterion 7: algebraic projector oracle for linear involutions --------

Check c7_projector_oracle() {
  Check c;
  double worst = 0.0;
  int scenarios = 0;
  const auto compare = [&](const LipschitzAction& act, const Matrix& a,
                           const ConvexBody& body, double tol, int max_iter,
                           std::uint64_t seed) {
    const Matrix p = 0.5 * (Matrix::Identity(a.rows(), a.cols()) + a);
    const Retraction r(act, uniform_z2_mean(), tol, max_iter);
    Rng rng(seed);
    for (int i = 0; i < 100; ++i) {
      const Vector x = body.sample(rng);
      worst = std::max(worst, (r(x) - p * x).norm());
    }
    ++scenarios;
  };

  for (const std::string name : {"shear_z2", "orthogonal_z2"}) {
    const BuiltScenario b = build_scenario(name);
    const Matrix a =
        cli::parse_matrix(b.cfg.action_spec.at("matrix"), "action.matrix");
    compare(b.action, a, b.cfg.body, b.cfg.tol, b.max_iter, 700 + scenarios);
  }
  Rng rng(71);
  for (int t = 0; t < 3; ++t) {
    const oracles::ShearScenario sc = oracles::random_shear(rng);
    const ConvexBody body = ConvexBody::ellipsoid(sc.shape, 1.0);
    compare(LipschitzAction::involution(sc.a, body), sc.a, body, 1e-11, 300,
            710 + t);
  }
  c.require(worst <= 1e-8, "retraction agrees with the half-sum projector");
  c.note(fmt("%d involution scenarios, worst distance %.2e", scenarios, worst));
  return c;
}

// --- criterion 8: Holder envelope over the shear family --------------------

Check c8_holder() {
  Check c;
  Rng rng(88);
  double worst_ratio = 0.0;
  for (int t = 0; t < 5; ++t) {
    const oracles::ShearScenario sc = oracles::random_shear(rng);
    const ConvexBody body = ConvexBody::ellipsoid(sc.shape, 1.0);
    const LipschitzAction act = LipschitzAction::involution(sc.a, body);
    const Retraction r(act, uniform_z2_mean(), 1e-11, 300);
    const HolderEstimate est =
        check_holder([&r](const Vector& x) { return r(x); }, body,
                     act.declared_k(), 1000, 880 + static_cast<std::uint64_t>(t));
    c.require(est.pairs_tested >= 990, "pair budget was actually spent");
    worst_ratio = std::max(worst_ratio, est.worst_ratio);
  }
  c.require(worst_ratio <= 1.0 + 1e-6,
            "|Rx - Ry| <= c (|x - y|/diam)^alpha on every sampled pair");
  c.note(fmt("5 scenarios x 1000 pairs, worst envelope ratio %.6f", worst_ratio));
  return c;
}

// --- criterion 9: window average of the contraction action -----------------

Check c9_window_contraction() {
  Check c;
  const BuiltScenario b = build_scenario("contraction_folner");
  const cli::ResolvedSemigroup sg =
      cli::resolve_semigroup(b.cfg.semigroup_spec, b.cfg.base_dir);
  c.require(sg.is_window && sg.window_size == 1000, "window N = 1000");
  c.require(std::abs(b.mu.defect - 2.0 / sg.window_size) <= 1e-12,
            "window mean defect equals 2/N");

  const Vector p =
      cli::parse_vector(b.cfg.action_spec.at("point"), "action.point");
  const double q = b.cfg.action_spec.at("ratio").get<double>();
  c.require(q == 0.5, "contraction ratio 0.5");
  const double c_n = oracles::window_contraction_factor(q, sg.window_size);

  const Vector x0 = cli::resolve_x0(b.cfg, b.cfg.body, std::nullopt);
  const RetractionTrace trace =
      iterate_retraction(b.action, b.mu, x0, b.cfg.tol, b.max_iter);
  c.require(trace.converged, "window iteration converges");
  c.require((trace.limit - p).norm() <= 2e-3,
            "limit within 2e-3 of the unique fixed point");
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < trace.iterates.size(); ++n) {
    const Vector predicted =
        b.cfg.body.project(p + c_n * (trace.iterates[n] - p));
    worst = std::max(worst, (trace.iterates[n + 1] - predicted).norm());
  }
  c.require(worst <= 1e-12, "iterates match the direct-summation oracle");
  c.note(fmt("limit error %.2e, oracle deviation %.2e, %d sweeps",
             (trace.limit - p).norm(), worst, trace.iterations_used));
  return c;
}

// --- criterion 10: negative controls ---------------------------------------

Check c10_negative_controls() {
  Check c;

  // A mean concentrated on a subsemigroup is not invariant; the resulting
  // averaged limit must be caught by the action-identity check while the
  // idempotence identity stays intact.
  {
    const BuiltScenario b = build_scenario("cyclic_z4_sabotaged");
    c.require(!b.mu.exact, "sabotaged weights must not validate as exact");
    const Retraction r(b.action, b.mu, b.cfg.tol, b.max_iter);
    const VerificationReport v = verify_retraction(
        r, std::max(100, b.cfg.verify.samples), b.cfg.verify.seed, 1e-6);
    c.require(v.max_action_defect > 1e-6,
              "sabotaged mean must fail |T_s(Rx) - Rx| <= 1e-6");
    c.require(v.max_idempotence_defect <= 1e-6,
              "sabotage leaves idempotence intact");
  }

  // Non-associative input is rejected with a witness the raw table confirms.
  {
    const std::vector<std::vector<int>> bad = {{0, 1}, {0, 0}};
    bool rejected = false;
    try {
      FiniteSemigroup::from_table({}, bad);
    } catch (const AssociativityError& e) {
      rejected = true;
      const AssociativityWitness& w = e.witness();
      const std::size_t a = static_cast<std::size_t>(w.a);
      const std::size_t bb = static_cast<std::size_t>(w.b);
      const std::size_t cc = static_cast<std::size_t>(w.c);
      const int left = bad[static_cast<std::size_t>(bad[a][bb])][cc];
      const int right = bad[a][static_cast<std::size_t>(bad[bb][cc])];
      c.require(left != right, "witness triple really violates associativity");
    }
    c.require(rejected, "non-associative table must be rejected");
  }

  // The distance-scaled perturbation has Fix T = F exactly: F is fixed, and
  // off F the displacement recovers the distance to F.
  {
    const BuiltScenario b = build_scenario("dist_perturbation");
    const FixedSet f =
        cli::parse_fixed_set_spec(b.cfg.action_spec.at("fixed_set"));
    const Vector anchor =
        cli::parse_vector(b.cfg.action_spec.at("anchor"), "action.anchor");
    const double eps = b.cfg.action_spec.at("eps").get<double>();

    Rng rng(1010);
    double worst_fwd = 0.0, worst_conv = 0.0;
    int converse_checked = 0;
    for (int i = 0; i < 100; ++i) {
      const Vector on_f = f.sample(rng);
      worst_fwd = std::max(worst_fwd, (b.action.step(on_f) - on_f).norm());
      const Vector x = b.cfg.body.sample(rng);
      if ((anchor - x).norm() > 0.01) {
        const double recovered =
            (b.action.step(x) - x).norm() / (eps * (anchor - x).norm());
        worst_conv = std::max(worst_conv, std::abs(recovered - f.distance(x)));
        ++converse_checked;
      }
    }
    c.require(worst_fwd <= 1e-9, "every point of F is fixed by the generator");
    c.require(converse_checked >= 50, "enough off-anchor samples");
    c.require(worst_conv <= 1e-9,
              "displacement recovers eps d(x,F) |anchor - x|");
    c.note(fmt("sabotage flagged; witness verified; Fix T = F "
               "(forward %.2e, converse %.2e)", worst_fwd, worst_conv));
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    std::function<Check()> run;
  };
  const std::vector<Entry> entries = {
      {1, "thresholds and convexity modulus", c1_thresholds},
      {2, "invariant-mean solver", c2_mean_solver},
      {3, "residual contraction", c3_residual_contraction},
      {4, "gap decay envelope", c4_gap_bound},
      {5, "one-step collapse (nonexpansive)", c5_one_step_collapse},
      {6, "retraction algebra", c6_retraction_algebra},
      {7, "projector oracle", c7_projector_oracle},
      {8, "Holder envelope", c8_holder},
      {9, "window contraction", c9_window_contraction},
      {10, "negative controls", c10_negative_controls},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    Check c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.ok = false;
      c.detail = std::string("exception: ") + ex.what();
    }
    if (!c.ok) ++failures;
    std::printf("[criterion %2d] %s  %s: %s\n", e.id, c.ok ? "PASS" : "FAIL",
                e.title, c.detail.c_str());
  }
  std::printf("acceptance: %d/10 criteria pass\n",
              static_cast<int>(entries.size()) - failures);
  return failures == 0 ? 0 : 1;
}
