#include <benchmark/benchmark.h>

#include "operon/algebra.hpp"
#include "operon/entanglement.hpp"
#include "operon/numerics.hpp"
#include "operon/operations.hpp"
#include "operon/rng.hpp"
#include "operon/state_functional.hpp"

namespace {

using namespace operon;

ComplexVector singlet() {
  ComplexVector x = ComplexVector::Zero(4);
  x(1) = 1.0 / std::sqrt(2.0);
  x(2) = -1.0 / std::sqrt(2.0);
  return x;
}

ComplexMatrix werner(double p) {
  const ComplexVector s = singlet();
  return p * (s * s.adjoint()).eval() +
         (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
}

void bench_tensor_product(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RandomStream stream(1);
  const ComplexMatrix a = stream.gaussian_matrix(d, d);
  const ComplexMatrix b = stream.gaussian_matrix(d, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensor_product(a, b));
  }
}
BENCHMARK(bench_tensor_product)->Arg(2)->Arg(4)->Arg(8);

void bench_partial_trace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Dims dims{d, d};
  RandomStream stream(2);
  const ComplexMatrix rho = stream.random_density(dims.total());
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(rho, dims, Factor::A));
  }
}
BENCHMARK(bench_partial_trace)->Arg(2)->Arg(3)->Arg(4);

void bench_schmidt(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Dims dims{d, d};
  RandomStream stream(3);
  const ComplexVector x = stream.haar_vector(dims.total());
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt_decompose(x, dims));
  }
}
BENCHMARK(bench_schmidt)->Arg(2)->Arg(4)->Arg(8);

void bench_generate_algebra(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RandomStream stream(4);
  const std::vector<ComplexMatrix> gens = {stream.gaussian_matrix(d, d),
                                           stream.gaussian_matrix(d, d)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_algebra(gens, d));
  }
}
BENCHMARK(bench_generate_algebra)->Arg(2)->Arg(3)->Arg(4);

void bench_commutant(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Dims dims{d, d};
  const OperatorAlgebra ra = factor_algebra(dims, Factor::A);
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutant(ra));
  }
}
BENCHMARK(bench_commutant)->Arg(2)->Arg(3);

void bench_ppt_verdict(benchmark::State& state) {
  const Dims dims{2, 2};
  const StateFunctional rho(werner(0.7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppt_verdict(rho, dims));
  }
}
BENCHMARK(bench_ppt_verdict);

void bench_separable_approximation(benchmark::State& state) {
  const Dims dims{2, 2};
  const StateFunctional rho(werner(0.2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(separable_approximation(rho, dims));
  }
}
BENCHMARK(bench_separable_approximation);

void bench_locality_report(benchmark::State& state) {
  const Dims dims{2, 2};
  RandomStream stream(5);
  const KrausOperation op({stream.random_unitary(dims.total())});
  const OperatorAlgebra ra = factor_algebra(dims, Factor::A);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_local_to(op, ra));
  }
}
BENCHMARK(bench_locality_report);

}  // namespace

BENCHMARK_MAIN();
