#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

#include <meanret/analysis.hpp>
#include <meanret/retraction.hpp>
#include <meanret/rng.hpp>

namespace meanret::cli {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Per-criterion generators: one deterministic stream per check so adding or
/// removing a criterion does not shift any other criterion's samples.
Rng tagged_rng(std::uint64_t seed, std::uint64_t tag) {
  return Rng(seed * 1000003u + tag);
}

json vector_to_json(const Vector& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json mean_to_json(const Mean& mu) {
  return {{"weights", vector_to_json(mu.weights)},
          {"defect", mu.defect},
          {"exact", mu.exact},
          {"size", mu.weights.size()}};
}

void finish(RunReport& rep, const Timer& timer, const CliOptions& opt) {
  rep.wall_seconds = timer.seconds();
  print_report(rep);
  write_report(rep, opt.out_dir, opt.format);
}

std::uint64_t verify_seed(const ExperimentConfig& cfg, const CliOptions& opt) {
  return opt.seed ? *opt.seed : cfg.verify.seed;
}

RunReport base_report(const std::string& command, const ExperimentConfig& cfg,
                      const CliOptions& opt) {
  RunReport rep;
  rep.command = command;
  rep.scenario = cfg.scenario;
  rep.config_echo = cfg.raw;
  rep.seeds = {{"verify", verify_seed(cfg, opt)},
               {"x0", cfg.x0_seed ? json(*cfg.x0_seed) : json()},
               {"override", opt.seed ? json(*opt.seed) : json()}};
  return rep;
}

/// The element matrix for linear families, rebuilt from the config spec so
/// the projector oracle does not lean on the engine under test.
Matrix linear_generator(const ExperimentConfig& cfg) {
  const json& a = cfg.action_spec;
  if (cfg.action_spec.value("family", "") == "involution")
    return parse_matrix(a.at("matrix"), "action.matrix");
  const Matrix gen = parse_matrix(a.at("generator"), "action.generator");
  if (!a.contains("conjugator")) return gen;
  const Matrix conj = parse_matrix(a.at("conjugator"), "action.conjugator");
  return conj * gen * Eigen::FullPivLU<Matrix>(conj).inverse();
}

/// Group average (1/m) sum A^j: the orthogonal-algebra route to the common
/// fixed subspace, independent of the iteration engine.
Matrix average_projector(const Matrix& a, int order) {
  Matrix power = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = Matrix::Zero(a.rows(), a.cols());
  for (int j = 0; j < order; ++j) {
    sum += power;
    power = a * power;
  }
  return sum / static_cast<double>(order);
}

void add_retraction_algebra(RunReport& rep, const Retraction& r, int samples,
                            std::uint64_t seed) {
  const VerificationReport v = verify_retraction(r, samples, seed, 1e-6);
  rep.criteria.push_back({"action-identity", v.max_action_defect <= v.allowance,
                          v.max_action_defect, v.allowance, ""});
  rep.criteria.push_back({"idempotence", v.max_idempotence_defect <= v.allowance,
                          v.max_idempotence_defect, v.allowance, ""});
  rep.criteria.push_back({"fixed-identity",
                          v.max_fixed_identity_defect <= v.allowance,
                          v.max_fixed_identity_defect, v.allowance, ""});
}

}  // namespace

int cmd_mean(const ExperimentConfig& cfg, const CliOptions& opt) {
  const Timer timer;
  RunReport rep = base_report("mean", cfg, opt);
  const ResolvedSemigroup sg =
      resolve_semigroup(cfg.semigroup_spec, cfg.base_dir);
  const InvariantMeanResult res = build_mean(cfg, sg);

  if (!res.feasible()) {
    rep.mean_summary = {{"feasible", false}};
    json cert;
    cert["farkas"] = vector_to_json(res.certificate->farkas);
    cert["infeasibility"] = res.certificate->infeasibility;
    rep.extra = {{"infeasibility_certificate", cert}};
    rep.criteria.push_back({"invariant-mean-feasible", false,
                            res.certificate->infeasibility, 0.0,
                            "no left-invariant mean exists; certificate "
                            "attached"});
    finish(rep, timer, opt);
    return 1;
  }

  const Mean& mu = *res.mean;
  rep.mean_summary = mean_to_json(mu);
  rep.mean_summary["feasible"] = true;

  if (cfg.mean_spec.is_string()) {
    const std::string mode = cfg.mean_spec.get<std::string>();
    if (mode == "exact") {
      rep.criteria.push_back({"mean-invariance", mu.defect <= 1e-9, mu.defect,
                              1e-9, ""});
    } else {  // folner:N has defect exactly 2/N
      const double bound = 2.0 / sg.window_size;
      rep.criteria.push_back({"window-defect",
                              std::abs(mu.defect - bound) <= 1e-12,
                              std::abs(mu.defect - bound), 1e-12,
                              "deviation from 2/N"});
    }
  }
  finish(rep, timer, opt);
  return rep.all_pass() ? 0 : 1;
}

int cmd_retract(const ExperimentConfig& cfg, const CliOptions& opt) {
  const Timer timer;
  RunReport rep = base_report("retract", cfg, opt);
  const ResolvedSemigroup sg =
      resolve_semigroup(cfg.semigroup_spec, cfg.base_dir);
  const LipschitzAction action = build_action(cfg, sg);
  const InvariantMeanResult res = build_mean(cfg, sg);
  if (!res.feasible())
    throw std::invalid_argument(
        "config: scenario requests an exact invariant mean but the semigroup "
        "admits none");
  const Mean& mu = *res.mean;
  rep.mean_summary = mean_to_json(mu);

  const Vector x0 = resolve_x0(cfg, cfg.body, opt.seed);
  const int max_iter =
      cfg.max_iter ? *cfg.max_iter : default_max_iterations(action, mu, cfg.tol);
  rep.extra = {{"x0", vector_to_json(x0)},
               {"max_iter", max_iter},
               {"declared_k", action.declared_k()}};

  RetractionTrace trace;
  try {
    trace = iterate_retraction(action, mu, x0, cfg.tol, max_iter);
  } catch (const std::runtime_error& e) {
    rep.criteria.push_back({"iteration-finite", false,
                            std::numeric_limits<double>::infinity(), 0.0,
                            e.what()});
    finish(rep, timer, opt);
    return 1;
  }
  rep.trace_summary = json::parse(trace_summary_json(trace));
  const double final_gap = trace.gaps.empty() ? 0.0 : trace.gaps.back();
  rep.criteria.push_back(
      {"converged", trace.converged, final_gap, cfg.tol,
       "final gap after " + std::to_string(trace.iterations_used) +
           " iterations"});

  if (opt.format == "csv" || opt.format == "both") {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const std::string path =
        (fs::path(opt.out_dir) / (cfg.scenario + "_trace.csv")).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trace_csv(out, trace);
  }

  if (cfg.verify_requested) {
    const Retraction r(action, mu, cfg.tol, max_iter);
    add_retraction_algebra(rep, r, cfg.verify.samples, verify_seed(cfg, opt));
  }
  finish(rep, timer, opt);
  return rep.all_pass() ? 0 : 1;
}

namespace {

void add_holder_criterion(RunReport& rep, const Retraction& r,
                          const ExperimentConfig& cfg, std::uint64_t seed) {
  const HolderEstimate est = check_holder(
      [&r](const Vector& x) { return r(x); }, cfg.body,
      r.action().declared_k(), cfg.verify.pairs, seed);
  rep.criteria.push_back({"holder-envelope", est.worst_ratio <= 1.0 + 1e-6,
                          est.worst_ratio, 1.0 + 1e-6,
                          "ratio of |Rx - Ry| to the envelope"});
  rep.extra["holder"] = {{"alpha_theory", est.alpha_theory},
                         {"c_theory", est.c_theory},
                         {"alpha_empirical", est.alpha_empirical},
                         {"worst_ratio", est.worst_ratio},
                         {"pairs_tested", est.pairs_tested}};
}

}  // namespace

int cmd_verify(const ExperimentConfig& cfg, const CliOptions& opt,
               bool holder_only) {
  const Timer timer;
  RunReport rep = base_report(holder_only ? "holder" : "verify", cfg, opt);
  const ResolvedSemigroup sg =
      resolve_semigroup(cfg.semigroup_spec, cfg.base_dir);
  const LipschitzAction action = build_action(cfg, sg);
  const InvariantMeanResult res = build_mean(cfg, sg);
  if (!res.feasible())
    throw std::invalid_argument(
        "config: scenario requests an exact invariant mean but the semigroup "
        "admits none");
  const Mean& mu = *res.mean;
  rep.mean_summary = mean_to_json(mu);

  const double k = action.declared_k();
  const double gamma = k * k - 1.0;
  const double diam = cfg.body.diameter();
  const std::uint64_t seed = verify_seed(cfg, opt);
  const int max_iter =
      cfg.max_iter ? *cfg.max_iter : default_max_iterations(action, mu, cfg.tol);
  const Retraction r(action, mu, cfg.tol, max_iter);
  const bool theorem_regime = mu.exact && k > 1.0 && k < kSqrt2;

  if (holder_only) {
    if (!theorem_regime)
      throw std::invalid_argument(
          "config: the Holder bound needs an exact invariant mean and a "
          "Lipschitz constant strictly between 1 and sqrt(2)");
    add_holder_criterion(rep, r, cfg, seed);
    finish(rep, timer, opt);
    return rep.all_pass() ? 0 : 1;
  }

  // Structural checks first: the family really is an action and really is
  // k-Lipschitz.
  {
    const double defect = check_homomorphism(action, cfg.verify.samples, seed);
    rep.criteria.push_back({"homomorphism", defect <= 1e-9, defect, 1e-9, ""});
  }
  if (action.k_is_analytic()) {
    try {
      const double worst =
          estimate_uniform_lipschitz(action, cfg.verify.samples, seed);
      rep.criteria.push_back(
          {"lipschitz-bound", worst <= k + 1e-9, worst, k + 1e-9, ""});
    } catch (const std::logic_error& e) {
      rep.criteria.push_back({"lipschitz-bound", false, 0.0, k + 1e-9,
                              e.what()});
    }
  } else {
    rep.extra["empirical_lipschitz"] =
        estimate_uniform_lipschitz(action, cfg.verify.samples, seed);
  }

  if (action.over_naturals()) {
    const double bound = 2.0 / sg.window_size;
    rep.criteria.push_back({"window-defect",
                            std::abs(mu.defect - bound) <= 1e-12,
                            std::abs(mu.defect - bound), 1e-12,
                            "deviation from 2/N"});
  } else {
    rep.criteria.push_back(
        {"mean-invariance", mu.defect <= 1e-9, mu.defect, 1e-9, ""});
  }

  add_retraction_algebra(rep, r, cfg.verify.samples, seed);

  if (theorem_regime && !action.over_naturals()) {
    // Residual contraction and the gap bound along traces from seeded
    // starts; both are per-step inequalities, so the worst margin over
    // every step of every trace is recorded.
    Rng rng = tagged_rng(seed, 11);
    const int starts = std::min(20, cfg.verify.samples);
    double worst_residual = -std::numeric_limits<double>::infinity();
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < starts; ++i) {
      const Vector x0 = cfg.body.sample(rng);
      const RetractionTrace trace =
          iterate_retraction(action, mu, x0, cfg.tol, max_iter);
      for (std::size_t n = 0; n + 1 < trace.residuals.size(); ++n)
        worst_residual = std::max(
            worst_residual, trace.residuals[n + 1] - gamma * trace.residuals[n]);
      double envelope = 4.0 * diam * diam;
      for (std::size_t n = 0; n < trace.gaps.size(); ++n) {
        worst_gap =
            std::max(worst_gap, trace.gaps[n] * trace.gaps[n] - envelope);
        envelope *= gamma;
      }
    }
    rep.criteria.push_back({"residual-contraction", worst_residual <= 1e-9,
                            worst_residual, 1e-9,
                            "max of r(x_{n+1}) - (k^2-1) r(x_n)"});
    rep.criteria.push_back({"gap-bound", worst_gap <= 1e-9, worst_gap, 1e-9,
                            "max of gap_n^2 - 4 (k^2-1)^n diam^2"});
    add_holder_criterion(rep, r, cfg, seed);
  }

  if (mu.exact && k <= 1.0 && !action.over_naturals()) {
    // With a nonexpansive family and an exact mean a single averaged step
    // lands on a common fixed point.
    Rng rng = tagged_rng(seed, 13);
    double worst_res = 0.0, worst_fix = 0.0;
    for (int i = 0; i < cfg.verify.samples; ++i) {
      const Vector x1 =
          cfg.body.project(averaged_map(action, mu, cfg.body.sample(rng)));
      worst_res = std::max(worst_res, residual(action, mu, x1));
      for (int s = 0; s < action.semigroup().size(); ++s)
        worst_fix = std::max(worst_fix, (action.apply(s, x1) - x1).norm());
    }
    rep.criteria.push_back(
        {"one-step-residual", worst_res <= 1e-10, worst_res, 1e-10, ""});
    rep.criteria.push_back(
        {"one-step-fixed", worst_fix <= 1e-9, worst_fix, 1e-9, ""});
  }

  const std::string family = action.family();
  if (mu.exact && (family == "involution" || family == "cyclic_linear")) {
    // Independent oracle: the retraction of a linear isometric/involutive
    // family must agree with the algebraic average of the element matrices.
    const Matrix a = linear_generator(cfg);
    const Matrix p = average_projector(a, action.semigroup().size());
    Rng rng = tagged_rng(seed, 17);
    double worst = 0.0;
    for (int i = 0; i < cfg.verify.samples; ++i) {
      const Vector x = cfg.body.sample(rng);
      worst = std::max(worst, (r(x) - p * x).norm());
    }
    rep.criteria.push_back(
        {"projector-oracle", worst <= 1e-8, worst, 1e-8,
         "distance between Rx and the averaged-matrix image"});
  }

  if (family == "contraction") {
    const Vector p = parse_vector(cfg.action_spec.at("point"), "action.point");
    const double q = cfg.action_spec.at("ratio").get<double>();
    const int n_window = sg.window_size;
    // Window average of q^j for j = 1..N, the exact contraction factor of
    // the averaged map.
    const double c_n =
        q * (1.0 - std::pow(q, n_window)) / (n_window * (1.0 - q));
    const Vector x0 = resolve_x0(cfg, cfg.body, opt.seed);
    const RetractionTrace trace =
        iterate_retraction(action, mu, x0, cfg.tol, max_iter);
    rep.criteria.push_back({"window-limit",
                            (trace.limit - p).norm() <= 2e-3,
                            (trace.limit - p).norm(), 2e-3,
                            "distance from the unique fixed point"});
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < trace.iterates.size(); ++n) {
      const Vector predicted =
          cfg.body.project(p + c_n * (trace.iterates[n] - p));
      worst = std::max(worst, (trace.iterates[n + 1] - predicted).norm());
    }
    rep.criteria.push_back({"window-oracle", worst <= 1e-12, worst, 1e-12,
                            "iterates vs the closed-form averaged map"});
    rep.extra["window_contraction_factor"] = c_n;
  }

  if (family == "dist_perturbation") {
    const FixedSet f = parse_fixed_set_spec(cfg.action_spec.at("fixed_set"));
    const Vector anchor =
        parse_vector(cfg.action_spec.at("anchor"), "action.anchor");
    const double eps = cfg.action_spec.at("eps").get<double>();
    Rng rng = tagged_rng(seed, 19);
    // Forward: every point of F is fixed by the generator.
    double worst_fwd = 0.0;
    for (int i = 0; i < cfg.verify.samples; ++i) {
      const Vector x = f.sample(rng);
      worst_fwd = std::max(worst_fwd, (action.step(x) - x).norm());
    }
    rep.criteria.push_back(
        {"fixed-set-forward", worst_fwd <= 1e-9, worst_fwd, 1e-9,
         "residual of the generator on sampled points of F"});
    // Converse: off F the displacement is exactly eps d(x,F) |anchor - x|,
    // so it vanishes only on F (the anchor itself lies in F).
    double worst_id = 0.0;
    bool moved_off_f = true;
    for (int i = 0; i < cfg.verify.samples; ++i) {
      const Vector x = cfg.body.sample(rng);
      const double resid = (action.step(x) - x).norm();
      const double expected = eps * f.distance(x) * (anchor - x).norm();
      worst_id = std::max(worst_id, std::abs(resid - expected));
      if (f.distance(x) > 1e-6 && (anchor - x).norm() > 1e-6 && resid == 0.0)
        moved_off_f = false;
    }
    rep.criteria.push_back(
        {"fixed-set-converse", moved_off_f && worst_id <= 1e-9, worst_id, 1e-9,
         "residual vs eps d(x,F) |anchor - x|"});
  }

  {
    Rng rng = tagged_rng(seed, 23);
    const RetractionTrace trace =
        iterate_retraction(action, mu, cfg.body.sample(rng), cfg.tol, max_iter);
    if (const auto rate = decay_rate_fit(trace))
      rep.extra["decay_rate"] = *rate;
  }

  finish(rep, timer, opt);
  return rep.all_pass() ? 0 : 1;
}

int cmd_threshold(const CliOptions& opt) {
  const Timer timer;
  RunReport rep;
  rep.command = "threshold";
  rep.scenario = "thresholds";
  rep.config_echo = json::object();
  rep.seeds = json::object();

  const double gk = goebel_kirk_threshold();
  const double lif = lifschitz_threshold();
  const double sqrt5_half = std::sqrt(5.0) / 2.0;
  rep.criteria.push_back({"goebel-kirk-threshold",
                          std::abs(gk - sqrt5_half) <= 1e-9,
                          std::abs(gk - sqrt5_half), 1e-9,
                          "distance from sqrt(5)/2"});
  rep.criteria.push_back({"lifschitz-threshold", std::abs(lif - kSqrt2) <= 1e-12,
                          std::abs(lif - kSqrt2), 1e-12,
                          "distance from sqrt(2)"});
  const double extremes =
      std::max(std::abs(hilbert_modulus(0.0)), std::abs(hilbert_modulus(2.0) - 1.0));
  rep.criteria.push_back({"modulus-extremes", extremes <= 1e-12, extremes,
                          1e-12, "delta(0) = 0 and delta(2) = 1"});

  json table = json::array();
  std::printf("uniform-convexity modulus delta(eps) = 1 - sqrt(1 - eps^2/4)\n");
  for (const double eps : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double d = hilbert_modulus(eps);
    table.push_back({{"eps", eps}, {"delta", d}});
    std::printf("  delta(%.1f) = %.9f\n", eps, d);
  }
  std::printf("fixed-point Lipschitz thresholds: %.9f (uniform-convexity "
              "route), %.9f (Lifschitz route)\n", gk, lif);
  rep.extra = {{"goebel_kirk", gk}, {"lifschitz", lif}, {"modulus_table", table}};

  finish(rep, timer, opt);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace meanret::cli
