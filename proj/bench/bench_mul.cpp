// Serial reference kernel vs the OpenMP sliced kernel on the products that
// dominate the table computations.

#include <benchmark/benchmark.h>

#include "mpt/kernels.hpp"
#include "mpt/perverse.hpp"
#include "mpt/qfunc.hpp"

using namespace mpt;

namespace {

// A dense (q,p,u) series: the first term of the key equation.
const Series &operand(int order)
{
    static std::map<int, Series> cache;
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, keyeq_rhs1(scaled(Var::q, order) + 1)).first;
    }
    return it->second;
}

void BM_mul_reference(benchmark::State &state)
{
    const Series &f = operand(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel::mul_reference(f.slices(), f.slices(), f.q_cut()));
    }
}

void BM_mul_sliced(benchmark::State &state)
{
    const Series &f = operand(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel::mul_sliced(f.slices(), f.slices(), f.q_cut()));
    }
    state.counters["threads"] = kernel::max_threads();
}

} // namespace

BENCHMARK(BM_mul_reference)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mul_sliced)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
