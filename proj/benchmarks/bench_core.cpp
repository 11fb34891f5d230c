#include <benchmark/benchmark.h>

#include "ecplab/closedform.hpp"
#include "ecplab/fem.hpp"
#include "ecplab/geometry.hpp"
#include "ecplab/mesh.hpp"
#include "ecplab/nodal.hpp"

using namespace ecplab;
using geometry::DomainSpec;

static void BM_BoundaryRoot(benchmark::State& state) {
  const DomainSpec spec = DomainSpec::omega(0.2);
  const double step = 2.0 * geometry::kPi / 1024.0;
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < 1024; ++i)
      acc += geometry::boundary_inverse_radius(spec, i * step).r;
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_BoundaryRoot);

static void BM_Generate(benchmark::State& state) {
  const DomainSpec spec = DomainSpec::omega(0.1);
  const double h = 0.6 / state.range(0);
  for (auto _ : state) {
    auto m = mesh::generate(spec, h);
    benchmark::DoNotOptimize(m.vertices.data());
  }
}
BENCHMARK(BM_Generate)->Arg(16)->Arg(32);

static void BM_Refine(benchmark::State& state) {
  const auto m = mesh::generate(DomainSpec::omega(0.1), 0.6 / 16);
  for (auto _ : state) {
    auto r = mesh::refine(m);
    benchmark::DoNotOptimize(r.vertices.data());
  }
}
BENCHMARK(BM_Refine);

static void BM_Assemble(benchmark::State& state) {
  const auto m = mesh::generate(DomainSpec::omega(0.1), 0.6 / state.range(0));
  for (auto _ : state) {
    auto km = fem::assemble(m);
    benchmark::DoNotOptimize(km.first);
  }
  state.SetLabel(std::to_string(m.vertices.size()) + " dofs");
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32);

static void BM_SolveLowest(benchmark::State& state) {
  const auto m = mesh::generate(DomainSpec::omega(0.1), 0.6 / state.range(0));
  fem::SolveOptions opts;
  opts.k = 4;
  opts.dense_threshold = 0;  // iterative path for all sizes
  for (auto _ : state) {
    auto r = fem::solve(m, fem::BoundaryCondition::neumann, opts);
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
  state.SetLabel(std::to_string(m.vertices.size()) + " dofs");
}
BENCHMARK(BM_SolveLowest)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_NodalCount(benchmark::State& state) {
  const auto m = mesh::generate(DomainSpec::triangle(), 0.6 / 48);
  std::vector<double> phi(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    phi[i] = closedform::phi0_neumann(m.vertices[i].x, m.vertices[i].y);
  for (auto _ : state) {
    auto rep = nodal::count_nodal_domains(m, phi, 1.25);
    benchmark::DoNotOptimize(rep.beta0);
  }
}
BENCHMARK(BM_NodalCount);

static void BM_WindowScan(benchmark::State& state) {
  const auto m = mesh::generate(DomainSpec::triangle(), 0.6 / 24);
  std::vector<double> phi(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    phi[i] = closedform::phi0_neumann(m.vertices[i].x, m.vertices[i].y);
  for (auto _ : state) {
    auto scan = nodal::find_three_domain_window(m, phi, 0.0, 3.0, 200);
    benchmark::DoNotOptimize(scan.window);
  }
  state.SetLabel("200 offsets");
}
BENCHMARK(BM_WindowScan)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
