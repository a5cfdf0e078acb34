// Compares the OpenMP amplitude kernels against the serial reference
// implementation on the hot operations: norm accumulation, block rotation,
// and reduced Gram matrices.
//
//   ./stagesim_bench                 # all benchmarks
//   ./stagesim_bench --benchmark_filter=apply_block

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <vector>

#include "stagesim/kernels.hpp"
#include "stagesim/rng.hpp"
#include "stagesim/state.hpp"
#include "stagesim/types.hpp"

namespace {

using stagesim::QubitSet;
using stagesim::StateVector;
using stagesim::cplx;

StateVector make_state(int num_qubits) {
  stagesim::RngStream rng(stagesim::RngStream::derive(42, "bench",
                                                      num_qubits));
  return StateVector::haar_random(num_qubits, rng);
}

Eigen::MatrixXcd make_unitary(int block_qubits) {
  stagesim::RngStream rng(stagesim::RngStream::derive(43, "bench",
                                                      block_qubits));
  return stagesim::random_orthobasis(1 << block_qubits, rng);
}

QubitSet first_qubits(int count) {
  return QubitSet::range(0, count);
}

void bm_norm2_serial(benchmark::State& bench) {
  const auto state = make_state(static_cast<int>(bench.range(0)));
  for (auto _ : bench) {
    benchmark::DoNotOptimize(stagesim::kernels::serial::norm2(state.amps));
  }
}

void bm_norm2_parallel(benchmark::State& bench) {
  const auto state = make_state(static_cast<int>(bench.range(0)));
  for (auto _ : bench) {
    benchmark::DoNotOptimize(stagesim::kernels::norm2(state.amps));
  }
}

void bm_apply_block_serial(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  const int b = static_cast<int>(bench.range(1));
  auto state = make_state(n);
  const auto u = make_unitary(b);
  const auto block = first_qubits(b);
  for (auto _ : bench) {
    stagesim::kernels::serial::apply_block(u, state.amps, n, block);
    benchmark::DoNotOptimize(state.amps.data());
  }
}

void bm_apply_block_parallel(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  const int b = static_cast<int>(bench.range(1));
  auto state = make_state(n);
  const auto u = make_unitary(b);
  const auto block = first_qubits(b);
  for (auto _ : bench) {
    stagesim::kernels::apply_block(u, state.amps, n, block);
    benchmark::DoNotOptimize(state.amps.data());
  }
}

void bm_reduced_gram_serial(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  const int b = static_cast<int>(bench.range(1));
  const auto state = make_state(n);
  const auto block = first_qubits(b);
  Eigen::MatrixXcd gram;
  for (auto _ : bench) {
    stagesim::kernels::serial::reduced_gram(state.amps, n, block, gram);
    benchmark::DoNotOptimize(gram.data());
  }
}

void bm_reduced_gram_parallel(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  const int b = static_cast<int>(bench.range(1));
  const auto state = make_state(n);
  const auto block = first_qubits(b);
  Eigen::MatrixXcd gram;
  for (auto _ : bench) {
    stagesim::kernels::reduced_gram(state.amps, n, block, gram);
    benchmark::DoNotOptimize(gram.data());
  }
}

}  // namespace

BENCHMARK(bm_norm2_serial)->Arg(16)->Arg(18)->Arg(20);
BENCHMARK(bm_norm2_parallel)->Arg(16)->Arg(18)->Arg(20);
BENCHMARK(bm_apply_block_serial)
    ->Args({16, 4})
    ->Args({18, 4})
    ->Args({20, 4})
    ->Args({18, 8});
BENCHMARK(bm_apply_block_parallel)
    ->Args({16, 4})
    ->Args({18, 4})
    ->Args({20, 4})
    ->Args({18, 8});
BENCHMARK(bm_reduced_gram_serial)->Args({16, 4})->Args({18, 4})->Args({18, 6});
BENCHMARK(bm_reduced_gram_parallel)
    ->Args({16, 4})
    ->Args({18, 4})
    ->Args({18, 6});

BENCHMARK_MAIN();
