#include <benchmark/benchmark.h>

#include "vqcount/counting.hpp"
#include "vqcount/instances.hpp"
#include "vqcount/ising.hpp"
#include "vqcount/qsim.hpp"

using namespace vqcount;

namespace {

Formula nae(std::size_t n) { return generate(EnsembleSpec{Problem::Nae3Sat, n, {1, 1}, 42}); }

void BM_EnergyVector(benchmark::State& state) {
  const Formula f = nae(static_cast<std::size_t>(state.range(0)));
  const IsingModel model = build_ising(f);
  for (auto _ : state) benchmark::DoNotOptimize(energy_vector(model));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnergyVector)->DenseRange(10, 20, 2);

void BM_RunCircuit(benchmark::State& state) {
  const Formula f = nae(static_cast<std::size_t>(state.range(0)));
  const Mixer mixer = state.range(1) ? Mixer::Grover : Mixer::X;
  const auto circuit = make_circuit(mixer, energy_vector(build_ising(f)), {0.3, 0.2, 0.1}, {0.1, 0.2, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(run_circuit(circuit));
}
BENCHMARK(BM_RunCircuit)->ArgsProduct({{10, 14, 18}, {0, 1}});

void BM_SampleSolutions(benchmark::State& state) {
  const Formula f = nae(16);
  const auto circuit = make_circuit(Mixer::X, energy_vector(build_ising(f)), {0.3, 0.2, 0.1}, {0.1, 0.2, 0.3});
  const StateVector psi = run_circuit(circuit);
  SampleRequest req;
  req.target = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_solutions(psi, circuit.solutions, req, rng));
}
BENCHMARK(BM_SampleSolutions)->Arg(16)->Arg(256);

void BM_ExactCount(benchmark::State& state) {
  const Formula f = nae(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_count(f));
}
BENCHMARK(BM_ExactCount)->Arg(16)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
