#include "heisenberg/charts.hpp"
#include "heisenberg/frame.hpp"
#include "heisenberg/identities.hpp"
#include "heisenberg/surface.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace heis;

namespace {

Point sample_point(int n) {
  Eigen::VectorXd c(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) c[i] = 0.3 + 0.1 * i;
  return Point::from_coords(c);
}

void BM_GroupMul(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Point p = sample_point(n), q = group_inv(sample_point(n));
  for (auto _ : state) benchmark::DoNotOptimize(group_mul(p, q));
}
BENCHMARK(BM_GroupMul)->Arg(1)->Arg(2);

void BM_Jet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const ScalarField f = fields::exp_cos(n);
  const Point p = sample_point(n);
  for (auto _ : state) benchmark::DoNotOptimize(jet_eval(f, p, order));
}
BENCHMARK(BM_Jet)->Args({1, 2})->Args({1, 3})->Args({2, 3});

void BM_FrameJet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField f = fields::x1y1t(n);
  const Point p = sample_point(n);
  for (auto _ : state) benchmark::DoNotOptimize(frame_jet(f, p));
}
BENCHMARK(BM_FrameJet)->Arg(1)->Arg(2);

// normal, shape operator and curvature data at one surface node
void BM_SurfaceGeometry(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ImplicitSurface S(fields::ellipsoid(n, 1.0, 0.8, 1.3));
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n + 1);
  c[0] = 0.6;
  c[2 * n] = 1.3 * std::sqrt(1.0 - 0.36);
  const Point p = Point::from_coords(c);
  for (auto _ : state) benchmark::DoNotOptimize(surface_geometry(S, p));
}
BENCHMARK(BM_SurfaceGeometry)->Arg(1)->Arg(2);

void BM_ReillyIntegrands(benchmark::State& state) {
  const ImplicitSurface S(fields::euclidean_sphere(Eigen::VectorXd::Zero(3), 1.0));
  const ScalarField phi = fields::x1y1t(1);
  const Point p = sample_point(1);
  const SurfaceGeometry g = surface_geometry(S, Point::from_coords(p.coords().normalized()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reilly_volume_integrand(horizontal_ops(phi, p)));
    benchmark::DoNotOptimize(reilly_boundary(g, frame_jet(phi, g.p)));
  }
}
BENCHMARK(BM_ReillyIntegrands);

void BM_BallVolume(benchmark::State& state) {
  QuadratureSpec q;
  q.orders = {static_cast<int>(state.range(0))};
  q.levels = 1;
  const DomainChart D = ball_chart(Eigen::VectorXd::Zero(3), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_volume(D, q));
}
BENCHMARK(BM_BallVolume)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// one full excised pass: six cap radii, two refinement levels
void BM_SpherePerimeterPass(benchmark::State& state) {
  QuadratureSpec q;
  q.orders = {static_cast<int>(state.range(0))};
  q.levels = 2;
  const SurfaceChart S = sphere_chart(Eigen::VectorXd::Zero(3), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        excised_surface_integral(S, [](const SurfaceGeometry& g) { return g.Hcurv; }, Measure::h_perimeter, q));
}
BENCHMARK(BM_SpherePerimeterPass)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
