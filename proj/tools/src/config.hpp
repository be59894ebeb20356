#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>
#include <meanret/action.hpp>
#include <meanret/geometry.hpp>
#include <meanret/mean.hpp>
#include <meanret/semigroup.hpp>

namespace meanret::cli {

using json = nlohmann::json;

struct VerifySettings {
  int samples = 100;
  int pairs = 1000;
  std::uint64_t seed = 2026;
};

/// One experiment, fully determined by a JSON file.  Grammar:
///
///   {
///     "scenario":  "name",
///     "body":      {"kind": "ball",      "center": [...], "radius": r}
///               |  {"kind": "box",       "lower":  [...], "upper": [...]}
///               |  {"kind": "ellipsoid", "shape": [[...]], "radius": r},
///     "semigroup": "Z_n" | "N-window:N" | "table:PATH"
///               |  "left-zero:n" | "right-zero:n",
///     "action":    {"family": "involution", "matrix": [[...]]}
///               |  {"family": "cyclic", "generator": [[...]], "order": n,
///                   "conjugator": [[...]]?}
///               |  {"family": "contraction", "point": [...], "ratio": q}
///               |  {"family": "dist_perturbation", "fixed_set": <body spec>
///                   | {"points": [[...], ...]}, "anchor": [...], "eps": e},
///     "mean":      "exact" | "folner:N" | {"weights": [...]},
///     "x0":        [...] | "sampled:SEED",
///     "tol":       1e-8,
///     "max_iter":  200?,            // default derived from tol and k
///     "verify":    {"samples": 100, "pairs": 1000, "seed": 2026}?
///   }
///
/// Table paths are resolved relative to the config file's directory.
struct ExperimentConfig {
  std::string scenario;
  std::string base_dir;
  json raw;

  ConvexBody body = ConvexBody::ball(Vector::Zero(1), 1.0);
  std::string semigroup_spec;
  json action_spec;
  json mean_spec;
  std::optional<Vector> x0_explicit;
  std::optional<std::uint64_t> x0_seed;
  double tol = 1e-8;
  std::optional<int> max_iter;
  VerifySettings verify;
  bool verify_requested = false;
};

ExperimentConfig load_config(const std::string& path);

/// Semigroup specs name either a finite semigroup or a window {1..N} of the
/// naturals; the two cases flow through different mean constructors.
struct ResolvedSemigroup {
  bool is_window = false;
  int window_size = 0;
  std::optional<FiniteSemigroup> finite;
};

ResolvedSemigroup resolve_semigroup(const std::string& spec,
                                    const std::string& base_dir);

/// First line n, then n rows of n whitespace-separated 0-based indices,
/// optionally followed by one line of n element labels.
FiniteSemigroup read_table_file(const std::string& path);

ConvexBody parse_body(const json& spec);
Vector parse_vector(const json& spec, const std::string& what);
Matrix parse_matrix(const json& spec, const std::string& what);

/// A body spec, or {"points": [[...], ...]} for a finite set.
FixedSet parse_fixed_set_spec(const json& spec);

LipschitzAction build_action(const ExperimentConfig& cfg,
                             const ResolvedSemigroup& sg);

/// "exact" solves the invariance constraints and may come back infeasible
/// with a certificate; the other modes always produce a mean.
InvariantMeanResult build_mean(const ExperimentConfig& cfg,
                               const ResolvedSemigroup& sg);

Vector resolve_x0(const ExperimentConfig& cfg, const ConvexBody& body,
                  std::optional<std::uint64_t> seed_override);

}  // namespace meanret::cli
