#include <benchmark/benchmark.h>

#include "qlocal/presets.hpp"
#include "qlocal/propagator.hpp"
#include "qlocal/trotter.hpp"

using namespace qlocal;

namespace {

// one Heisenberg-picture generator application on an n-site chain
void bm_generator_apply(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  LiouvillianSpec spec = presets::dissipative_ising_chain(sites, 1.0, 1.0, 0.5);
  Region all = spec.geometry.all_sites();
  CompiledLiouvillian gen(spec, all, all);
  Matrix o = Matrix::Identity(gen.dim(), gen.dim());
  auto rng = rng_from_seed(1);
  o += 0.1 * random_hermitian(gen.dim(), rng);
  Matrix out(gen.dim(), gen.dim());
  for (auto _ : state) {
    gen.apply(0.0, o, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations());
}

// full observable evolution over a fixed span
void bm_evolve_observable(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  LiouvillianSpec spec = presets::dissipative_ising_chain(sites, 1.0, 1.0, 0.5);
  Region all = spec.geometry.all_sites();
  Op o = embed(single_site_op(sites / 2, pauli('z')), all, spec.dims);
  for (auto _ : state) {
    Op evolved = evolve_observable(spec, all, o, 0.0, 0.2);
    benchmark::DoNotOptimize(evolved.mat.data());
  }
}

// alternating-ascent norm estimation on a random qubit-pair superoperator
void bm_norm_estimate(benchmark::State& state) {
  SiteDims dims;
  auto rng = rng_from_seed(7);
  SuperOp t = random_superop(Region{0, 1}, dims, rng);
  NormOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    NormEstimate e = one_to_one_norm(t, opts);
    benchmark::DoNotOptimize(e.value);
  }
}

// interaction-path counting on a 2D grid hypergraph
void bm_count_paths(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Geometry g = Geometry::grid2d(3, 3);
  std::vector<Region> s;
  for (int a = 0; a < g.size(); ++a)
    for (int b = a + 1; b < g.size(); ++b)
      if (g.distance(a, b) == 1.0) s.push_back(Region{a, b});
  InteractionHypergraph hg(std::move(s));
  const Region x = hg.supports().front();
  const Region y = hg.supports().back();
  for (auto _ : state) {
    std::uint64_t c = count_paths(hg, x, y, n);
    benchmark::DoNotOptimize(c);
  }
}

// applying one product-formula slice worth of local channels
void bm_apply_circuit(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  LiouvillianSpec spec = presets::dissipative_ising_chain(sites, 1.0, 1.0, 0.5);
  Region all = spec.geometry.all_sites();
  Schedule sched;
  sched.times = {0.0, 0.1};
  sched.regions = {all};
  TrotterCircuit circuit =
      build_circuit(spec, sched, ChannelOrdering::Lexicographic, false);
  Op o = embed(single_site_op(sites / 2, pauli('z')), all, spec.dims);
  for (auto _ : state) {
    Op out = apply_circuit(spec, circuit, o);
    benchmark::DoNotOptimize(out.mat.data());
  }
}

}  // namespace

BENCHMARK(bm_generator_apply)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_evolve_observable)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_norm_estimate)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_count_paths)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_apply_circuit)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
