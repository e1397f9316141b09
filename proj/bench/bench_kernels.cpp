#include <benchmark/benchmark.h>

#include "fsm/fock_space.hpp"
#include "fsm/nuclearity.hpp"

using namespace fsm;

namespace {

const FockSpace& space() {
  static const FockSpace fs(single_zero(-1, kPi / 4), make_grid(6.0, 21), 5);
  return fs;
}

void BM_Symmetrize(benchmark::State& st) {
  Rng rng(1);
  const Tensor t = random_tensor(space().grid(), static_cast<int>(st.range(0)), rng);
  for (auto _ : st) benchmark::DoNotOptimize(symmetrize(space(), t));
}

void BM_SymmetrizeSerial(benchmark::State& st) {
  Rng rng(1);
  const Tensor t = random_tensor(space().grid(), static_cast<int>(st.range(0)), rng);
  for (auto _ : st) benchmark::DoNotOptimize(serial::symmetrize(space(), t));
}

void BM_Create(benchmark::State& st) {
  Rng rng(2);
  const FockVector v = random_fock(space(), 3, rng);
  const WaveFunction1 psi = random_wave(space().grid_ptr(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(create(space(), psi, v));
}

void BM_CreateSerial(benchmark::State& st) {
  Rng rng(2);
  const FockVector v = random_fock(space(), 3, rng);
  const WaveFunction1 psi = random_wave(space().grid_ptr(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(serial::create(space(), psi, v));
}

void BM_Gram(benchmark::State& st) {
  const auto K = KernelOperator::general(1.0, kPi / 4);
  for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(K, 12.0, static_cast<int>(st.range(0))));
}

void BM_GramSerial(benchmark::State& st) {
  const auto K = KernelOperator::general(1.0, kPi / 4);
  for (auto _ : st) benchmark::DoNotOptimize(serial::gram_matrix(K, 12.0, static_cast<int>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_Symmetrize)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(BM_SymmetrizeSerial)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK(BM_Create);
BENCHMARK(BM_CreateSerial);
BENCHMARK(BM_Gram)->Arg(200)->Arg(400);
BENCHMARK(BM_GramSerial)->Arg(200)->Arg(400);

BENCHMARK_MAIN();
