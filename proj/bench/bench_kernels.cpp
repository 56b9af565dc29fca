#include <benchmark/benchmark.h>

#include <random>

#include "torusq/exp_sums.hpp"
#include "torusq/quantizer.hpp"

using namespace torusq;

namespace {

const IMat kCat{{2, 1}, {3, 2}};
const IMat kSp4{{11, 3, 4, 10}, {6, 1, 2, 4}, {-2, -1, -1, -2}, {1, 1, 1, 1}};

Backend backend_of(const benchmark::State& s) { return s.range(1) ? Backend::Parallel : Backend::Serial; }

void BM_AveragingSumCat(benchmark::State& state) {
    HilbertSpace H(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(averaging_sum(H, kCat, backend_of(state)));
}

void BM_AveragingSumSp4(benchmark::State& state) {
    HilbertSpace H(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(averaging_sum(H, kSp4, backend_of(state)));
}

void BM_DiagonalElements(benchmark::State& state) {
    HilbertSpace H(static_cast<int>(state.range(0)), 2);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    CMatrix B(H.dim, H.dim);
    for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = cplx(g(rng), g(rng));
    auto T = elementary_op(H, {1, 2, 0, 1});
    for (auto _ : state) benchmark::DoNotOptimize(diagonal_elements(T, B, backend_of(state)));
}

void BM_ExpsumGrid(benchmark::State& state) {
    auto ctx = ExpSumContext::standalone(static_cast<u64>(state.range(0)), 1, true);
    auto nus = ctx.nonzero_nu();
    for (auto _ : state) benchmark::DoNotOptimize(expsum_grid(ctx, nus, backend_of(state)));
}

}  // namespace

BENCHMARK(BM_AveragingSumCat)->ArgsProduct({{101, 211}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AveragingSumSp4)->ArgsProduct({{11, 17}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiagonalElements)->ArgsProduct({{13, 23}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpsumGrid)->ArgsProduct({{101, 211}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
