#include <benchmark/benchmark.h>

#include "gronwall/bounds.hpp"
#include "gronwall/kernels.hpp"
#include "gronwall/oracle.hpp"

using namespace gronwall;

namespace {

GridFunction fn(const char* e, const Grid& g) { return sample(parse(e, {"t"}), g); }

void BM_ComputeB(benchmark::State& state) {
    const Grid g(0, 1, static_cast<std::size_t>(state.range(0)));
    const GridFunction b = fn("1 + t", g);
    const Kernel k = Kernel::parse(1, "exp(-(t-s))");
    const Kernel h = Kernel::parse(2, "1 + t*s*r");
    for (auto _ : state) benchmark::DoNotOptimize(compute_B(b, k, h, g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeB)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_ApplyQ(benchmark::State& state) {
    const Grid g(0, 1, static_cast<std::size_t>(state.range(0)));
    const KernelSet ks = KernelSet::iterated({Kernel::parse(1, "exp(t - t1)", "exp(t - t1)"),
                                              Kernel::parse(2, "1 + t*t2", "t2"), Kernel::parse(3, "t - t3", "1")});
    const GridFunction w = fn("exp(t)", g);
    for (auto _ : state) benchmark::DoNotOptimize(apply_Q(ks, w, g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplyQ)->RangeMultiplier(2)->Range(32, 128)->Complexity();

void BM_PicardRiccati(benchmark::State& state) {
    const Grid g(0, 0.9, static_cast<std::size_t>(state.range(0)));
    const auto inst = ProblemInstance::create({Theorem::thm32, 2, g, 1.0, fn("1", g), std::nullopt,
                                               KernelSet::pair(Kernel::zero(1), Kernel::zero(2))});
    for (auto _ : state) benchmark::DoNotOptimize(picard_extremal(inst));
}
BENCHMARK(BM_PicardRiccati)->RangeMultiplier(2)->Range(256, 2048);

void BM_BoundThm32(benchmark::State& state) {
    const Grid g(0, 1, static_cast<std::size_t>(state.range(0)));
    const auto inst = ProblemInstance::create({Theorem::thm32, 0.5, g, 1.0, fn("1 + t", g), std::nullopt,
                                               KernelSet::pair(Kernel::parse(1, "exp(-(t-s))"), Kernel::parse(2, "0.2"))});
    for (auto _ : state) benchmark::DoNotOptimize(thm32_bound(inst));
}
BENCHMARK(BM_BoundThm32)->RangeMultiplier(2)->Range(128, 1024);

}  // namespace

BENCHMARK_MAIN();
