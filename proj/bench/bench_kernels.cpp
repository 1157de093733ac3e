// Serial reference versus OpenMP kernels on the Test A mesh.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ariis/assembly.hpp"
#include "ariis/config.hpp"
#include "ariis/sparse.hpp"

using namespace ariis;

namespace {

struct Fixture {
  TetMesh mesh;
  SystemAssembler assembler;
  std::vector<Vec3> u, w, dirichlet_values;
  std::vector<char> dirichlet;
  std::vector<ActiveValve> valves;
  LinearSystem system;
  std::vector<double> x, y;

  Fixture() : mesh(build_mesh(preset_test_a())), assembler(mesh) {
    const std::size_t nv = mesh.num_vertices();
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> d(-0.1, 0.1);
    u.resize(nv);
    for (auto& v : u) v = {d(rng), d(rng), d(rng)};
    w.assign(nv, Vec3{});
    dirichlet_values.assign(nv, Vec3{});
    const auto mask = mesh.boundary_vertex_mask();
    dirichlet.assign(mask.begin(), mask.end());
    for (const auto& v : preset_test_a().problem.valves) valves.push_back({v, 1000.0});
    assembler.assemble(mesh, input(), system);
    x.resize(system.b.size());
    for (auto& v : x) v = d(rng);
    y.resize(x.size());
  }

  AssemblyInput input() const {
    AssemblyInput in;
    in.u_prev = u;
    in.u_ale = w;
    in.valves = valves;
    in.dirichlet = dirichlet;
    in.dirichlet_values = dirichlet_values;
    return in;
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_AssembleSerial(benchmark::State& state) {
  Fixture& f = fixture();
  LinearSystem sys;
  for (auto _ : state) {
    f.assembler.assemble_serial(f.mesh, f.input(), sys);
    benchmark::DoNotOptimize(sys.b.data());
  }
  state.counters["cells"] = static_cast<double>(f.mesh.num_cells());
}

void BM_AssembleParallel(benchmark::State& state) {
  Fixture& f = fixture();
  LinearSystem sys;
  for (auto _ : state) {
    f.assembler.assemble(f.mesh, f.input(), sys);
    benchmark::DoNotOptimize(sys.b.data());
  }
  state.counters["cells"] = static_cast<double>(f.mesh.num_cells());
}

void BM_SpmvSerial(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    kernels::spmv_serial(f.system.A, f.x, f.y);
    benchmark::DoNotOptimize(f.y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.system.A.nnz()));
}

void BM_SpmvParallel(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    kernels::spmv_parallel(f.system.A, f.x, f.y);
    benchmark::DoNotOptimize(f.y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.system.A.nnz()));
}

void BM_DotSerial(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_serial(f.x, f.x));
}

void BM_DotParallel(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_parallel(f.x, f.x));
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpmvSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpmvParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DotSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DotParallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
