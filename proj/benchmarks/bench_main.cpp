#include <benchmark/benchmark.h>

#include <vector>

#include <meanret/action.hpp>
#include <meanret/analysis.hpp>
#include <meanret/geometry.hpp>
#include <meanret/mean.hpp>
#include <meanret/retraction.hpp>
#include <meanret/rng.hpp>
#include <meanret/semigroup.hpp>

using namespace meanret;

namespace {

/// Invertible but non-orthogonal shape so projection exercises the iterative
/// ellipsoid path rather than the radial shortcut.
Matrix shear_shape(int dim) {
  Matrix s = Matrix::Identity(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) s(i, i + 1) = 0.3;
  return s;
}

LipschitzAction shear_action() {
  Matrix a(2, 2);
  a << 1.0, -0.6, 0.0, -1.0;
  return LipschitzAction::involution(a, ConvexBody::ellipsoid(shear_shape(2), 1.0));
}

Mean uniform_z2() {
  return mean_on_semigroup(FiniteSemigroup::cyclic(2), Vector::Constant(2, 0.5));
}

void bm_ellipsoid_projection(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const ConvexBody body = ConvexBody::ellipsoid(shear_shape(dim), 1.0);
  Rng rng(11);
  std::vector<Vector> outside;
  for (int i = 0; i < 64; ++i) {
    Vector v(dim);
    for (int j = 0; j < dim; ++j) v(j) = 3.0 * rng.gaussian();
    outside.push_back(v);
  }
  std::size_t at = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(body.project(outside[at]));
    at = (at + 1) % outside.size();
  }
}
BENCHMARK(bm_ellipsoid_projection)->Arg(2)->Arg(8)->Arg(32);

void bm_invariant_mean_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FiniteSemigroup s = FiniteSemigroup::cyclic(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_left_invariant_mean(s));
  }
}
BENCHMARK(bm_invariant_mean_solve)->Arg(3)->Arg(6)->Arg(12);

void bm_averaged_map(benchmark::State& state) {
  const LipschitzAction act = shear_action();
  const Mean mu = uniform_z2();
  Rng rng(13);
  const Vector x = act.domain().sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(averaged_map(act, mu, x));
  }
}
BENCHMARK(bm_averaged_map);

void bm_retraction_iterate(benchmark::State& state) {
  const LipschitzAction act = shear_action();
  const Mean mu = uniform_z2();
  Rng rng(17);
  std::vector<Vector> starts;
  for (int i = 0; i < 32; ++i) starts.push_back(act.domain().sample(rng));
  std::size_t at = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        iterate_retraction(act, mu, starts[at], 1e-10, 100));
    at = (at + 1) % starts.size();
  }
}
BENCHMARK(bm_retraction_iterate);

void bm_window_average(benchmark::State& state) {
  const int window = static_cast<int>(state.range(0));
  const ConvexBody body = ConvexBody::ball(Vector::Zero(2), 2.0);
  const LipschitzAction act = LipschitzAction::contraction(
      (Vector(2) << 0.3, -0.2).finished(), 0.5, body);
  const Mean mu = folner_mean(window);
  Rng rng(19);
  const Vector x = body.sample(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(averaged_map(act, mu, x));
  }
}
BENCHMARK(bm_window_average)->Arg(100)->Arg(1000);

void bm_holder_check(benchmark::State& state) {
  const LipschitzAction act = shear_action();
  const Retraction r(act, uniform_z2(), 1e-10, 100);
  const ConvexBody& body = act.domain();
  const double k = act.declared_k();
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_holder(
        [&r](const Vector& x) { return r(x); }, body, k, 256, 23));
  }
}
BENCHMARK(bm_holder_check);

}  // namespace

BENCHMARK_MAIN();
