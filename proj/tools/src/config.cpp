#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace meanret::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

double require_number(const json& j, const std::string& what) {
  if (!j.is_number()) fail(what + " must be a number");
  return j.get<double>();
}

/// Parses the integer suffix of specs like "Z_4" or "folner:100".
int spec_suffix(const std::string& spec, std::size_t pos,
                const std::string& what) {
  try {
    std::size_t used = 0;
    const int n = std::stoi(spec.substr(pos), &used);
    if (used != spec.size() - pos || n <= 0) throw std::invalid_argument("");
    return n;
  } catch (const std::exception&) {
    fail(what + " needs a positive integer suffix, got \"" + spec + "\"");
  }
}

}  // namespace

Vector parse_vector(const json& spec, const std::string& what) {
  if (!spec.is_array() || spec.empty()) fail(what + " must be a nonempty array");
  Vector v(static_cast<Eigen::Index>(spec.size()));
  for (std::size_t i = 0; i < spec.size(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        require_number(spec[i], what + " entries");
  return v;
}

Matrix parse_matrix(const json& spec, const std::string& what) {
  if (!spec.is_array() || spec.empty())
    fail(what + " must be a nonempty array of rows");
  const std::size_t cols = spec[0].is_array() ? spec[0].size() : 0;
  if (cols == 0) fail(what + " rows must be nonempty arrays");
  Matrix m(static_cast<Eigen::Index>(spec.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!spec[i].is_array() || spec[i].size() != cols)
      fail(what + " rows must all have " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          require_number(spec[i][j], what + " entries");
  }
  return m;
}

ConvexBody parse_body(const json& spec) {
  if (!spec.is_object()) fail("body must be an object");
  const std::string kind = spec.value("kind", "");
  if (kind == "ball") {
    return ConvexBody::ball(parse_vector(spec.at("center"), "body.center"),
                            require_number(spec.at("radius"), "body.radius"));
  }
  if (kind == "box") {
    return ConvexBody::box(parse_vector(spec.at("lower"), "body.lower"),
                           parse_vector(spec.at("upper"), "body.upper"));
  }
  if (kind == "ellipsoid") {
    return ConvexBody::ellipsoid(
        parse_matrix(spec.at("shape"), "body.shape"),
        require_number(spec.at("radius"), "body.radius"));
  }
  fail("body.kind must be ball, box or ellipsoid, got \"" + kind + "\"");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path + " is not valid JSON: " + e.what());
  }
  if (!raw.is_object()) fail(path + " must contain a JSON object");

  ExperimentConfig cfg;
  cfg.raw = raw;
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  cfg.scenario = raw.value("scenario", "unnamed");

  if (!raw.contains("body")) fail("missing \"body\"");
  cfg.body = parse_body(raw.at("body"));

  if (!raw.contains("semigroup") || !raw.at("semigroup").is_string())
    fail("missing string \"semigroup\"");
  cfg.semigroup_spec = raw.at("semigroup").get<std::string>();

  if (!raw.contains("action") || !raw.at("action").is_object())
    fail("missing object \"action\"");
  cfg.action_spec = raw.at("action");

  cfg.mean_spec = raw.value("mean", json("exact"));

  if (raw.contains("x0")) {
    const json& x0 = raw.at("x0");
    if (x0.is_array()) {
      cfg.x0_explicit = parse_vector(x0, "x0");
    } else if (x0.is_string()) {
      const std::string s = x0.get<std::string>();
      if (s.rfind("sampled:", 0) != 0)
        fail("x0 string must look like \"sampled:SEED\", got \"" + s + "\"");
      cfg.x0_seed = static_cast<std::uint64_t>(
          spec_suffix(s, std::string("sampled:").size(), "x0"));
    } else {
      fail("x0 must be an array or \"sampled:SEED\"");
    }
  }

  if (raw.contains("tol")) {
    cfg.tol = require_number(raw.at("tol"), "tol");
    if (!(cfg.tol > 0)) fail("tol must be positive");
  }
  if (raw.contains("max_iter")) {
    if (!raw.at("max_iter").is_number_integer() ||
        raw.at("max_iter").get<int>() < 1)
      fail("max_iter must be a positive integer");
    cfg.max_iter = raw.at("max_iter").get<int>();
  }

  if (raw.contains("verify")) {
    const json& v = raw.at("verify");
    if (!v.is_object()) fail("verify must be an object");
    cfg.verify_requested = true;
    cfg.verify.samples = v.value("samples", cfg.verify.samples);
    cfg.verify.pairs = v.value("pairs", cfg.verify.pairs);
    cfg.verify.seed = v.value("seed", cfg.verify.seed);
    if (cfg.verify.samples < 1 || cfg.verify.pairs < 1)
      fail("verify.samples and verify.pairs must be positive");
  }
  return cfg;
}

FiniteSemigroup read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open semigroup table file " + path);
  int n = 0;
  if (!(in >> n) || n <= 0)
    fail("table file " + path + " must start with a positive element count");
  std::vector<std::vector<int>> table(
      static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]))
        fail("table file " + path + " is truncated at row " + std::to_string(i));
  std::vector<std::string> labels;
  std::string tok;
  while (in >> tok) labels.push_back(tok);
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
    fail("table file " + path + " label line must have exactly " +
         std::to_string(n) + " entries");
  return FiniteSemigroup::from_table(std::move(labels), table);
}

ResolvedSemigroup resolve_semigroup(const std::string& spec,
                                    const std::string& base_dir) {
  ResolvedSemigroup out;
  if (spec.rfind("N-window:", 0) == 0) {
    out.is_window = true;
    out.window_size = spec_suffix(spec, std::string("N-window:").size(),
                                  "semigroup window");
    return out;
  }
  if (spec.rfind("Z_", 0) == 0) {
    out.finite = FiniteSemigroup::cyclic(spec_suffix(spec, 2, "semigroup Z_n"));
    return out;
  }
  if (spec.rfind("left-zero:", 0) == 0) {
    out.finite = FiniteSemigroup::left_zero(
        spec_suffix(spec, std::string("left-zero:").size(), "left-zero"));
    return out;
  }
  if (spec.rfind("right-zero:", 0) == 0) {
    out.finite = FiniteSemigroup::right_zero(
        spec_suffix(spec, std::string("right-zero:").size(), "right-zero"));
    return out;
  }
  if (spec.rfind("table:", 0) == 0) {
    std::filesystem::path p(spec.substr(std::string("table:").size()));
    if (p.is_relative() && !base_dir.empty())
      p = std::filesystem::path(base_dir) / p;
    out.finite = read_table_file(p.string());
    return out;
  }
  fail("semigroup spec must be Z_n, N-window:N, table:PATH, left-zero:n or "
       "right-zero:n, got \"" + spec + "\"");
}

FixedSet parse_fixed_set_spec(const json& spec) {
  if (spec.is_object() && spec.contains("points")) {
    const json& pts = spec.at("points");
    if (!pts.is_array() || pts.empty())
      fail("action.fixed_set.points must be a nonempty array");
    std::vector<Vector> points;
    points.reserve(pts.size());
    for (const auto& p : pts)
      points.push_back(parse_vector(p, "action.fixed_set.points"));
    return FixedSet::from_points(std::move(points));
  }
  return FixedSet::from_body(parse_body(spec));
}

LipschitzAction build_action(const ExperimentConfig& cfg,
                             const ResolvedSemigroup& sg) {
  const json& a = cfg.action_spec;
  const std::string family = a.value("family", "");

  if (family == "involution") {
    if (sg.is_window || sg.finite->size() != 2)
      fail("involution actions need a two-element semigroup, got \"" +
           cfg.semigroup_spec + "\"");
    return LipschitzAction::involution(
        parse_matrix(a.at("matrix"), "action.matrix"), cfg.body);
  }
  if (family == "cyclic") {
    if (!a.contains("order") || !a.at("order").is_number_integer())
      fail("cyclic actions need an integer \"order\"");
    const int order = a.at("order").get<int>();
    if (sg.is_window || sg.finite->size() != order)
      fail("cyclic action of order " + std::to_string(order) +
           " does not match semigroup \"" + cfg.semigroup_spec + "\"");
    const Matrix gen = parse_matrix(a.at("generator"), "action.generator");
    const Matrix conj =
        a.contains("conjugator")
            ? parse_matrix(a.at("conjugator"), "action.conjugator")
            : Matrix(Matrix::Identity(gen.rows(), gen.cols()));
    return LipschitzAction::cyclic_linear(conj, gen, order, cfg.body);
  }
  if (family == "contraction") {
    if (!sg.is_window)
      fail("contraction actions run over the naturals; use N-window:N");
    LipschitzAction act = LipschitzAction::contraction(
        parse_vector(a.at("point"), "action.point"),
        require_number(a.at("ratio"), "action.ratio"), cfg.body);
    return act;
  }
  if (family == "dist_perturbation") {
    if (!sg.is_window)
      fail("dist_perturbation actions run over the naturals; use N-window:N");
    return LipschitzAction::dist_perturbation(
        parse_fixed_set_spec(a.at("fixed_set")),
        parse_vector(a.at("anchor"), "action.anchor"),
        require_number(a.at("eps"), "action.eps"), cfg.body, sg.window_size);
  }
  fail("action.family must be involution, cyclic, contraction or "
       "dist_perturbation, got \"" + family + "\"");
}

InvariantMeanResult build_mean(const ExperimentConfig& cfg,
                               const ResolvedSemigroup& sg) {
  const json& m = cfg.mean_spec;
  InvariantMeanResult out;
  if (m.is_string()) {
    const std::string s = m.get<std::string>();
    if (s == "exact") {
      if (sg.is_window)
        fail("mean \"exact\" needs a finite semigroup; windows use folner:N");
      return solve_left_invariant_mean(*sg.finite);
    }
    if (s.rfind("folner:", 0) == 0) {
      const int n = spec_suffix(m.get<std::string>(),
                                std::string("folner:").size(), "folner mean");
      if (!sg.is_window || n != sg.window_size)
        fail("folner:" + std::to_string(n) + " does not match semigroup \"" +
             cfg.semigroup_spec + "\"");
      out.mean = folner_mean(n);
      return out;
    }
    fail("mean string must be \"exact\" or \"folner:N\", got \"" + s + "\"");
  }
  if (m.is_object() && m.contains("weights")) {
    Vector w = parse_vector(m.at("weights"), "mean.weights");
    if (sg.is_window) {
      if (w.size() != sg.window_size)
        fail("mean.weights length must equal the window size");
      out.mean = mean_on_window(std::move(w));
    } else {
      if (w.size() != sg.finite->size())
        fail("mean.weights length must equal the semigroup size");
      out.mean = mean_on_semigroup(*sg.finite, std::move(w));
    }
    return out;
  }
  fail("mean must be \"exact\", \"folner:N\" or {\"weights\": [...]}");
}

Vector resolve_x0(const ExperimentConfig& cfg, const ConvexBody& body,
                  std::optional<std::uint64_t> seed_override) {
  if (cfg.x0_explicit) {
    if (cfg.x0_explicit->size() != body.dimension())
      fail("x0 has dimension " + std::to_string(cfg.x0_explicit->size()) +
           " but the body has dimension " + std::to_string(body.dimension()));
    if (!body.contains(*cfg.x0_explicit, 1e-9 * (1.0 + body.diameter())))
      fail("x0 lies outside the body");
    return *cfg.x0_explicit;
  }
  const std::uint64_t seed =
      seed_override ? *seed_override : cfg.x0_seed.value_or(2026);
  return sample_point(body, seed);
}

}  // namespace meanret::cli
