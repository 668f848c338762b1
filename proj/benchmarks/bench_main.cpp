#include "rnncover/bounds.hpp"
#include "rnncover/losses.hpp"
#include "rnncover/networks.hpp"
#include "rnncover/tv.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rnncover;

MLPSpec bench_block(std::size_t s, std::size_t q) {
    Matrix W(s, q);
    for (std::size_t i = 0; i < W.data.size(); ++i)
        W.data[i] = 0.1 * static_cast<double>(i % 7) - 0.3;
    return make_mlp({s, q}, {std::move(W)});
}

void BM_NoisyRecurrentReadout(benchmark::State& state) {
    const std::size_t T = static_cast<std::size_t>(state.range(0));
    const std::size_t q = 3, p = 2, s = p + q - 1;
    const RecurrentConfig cfg = make_recurrent(bench_block(s, q), q, p, T);
    RealVec data(p * T, 0.25);
    const SequenceInput u = make_sequence(p, T, std::move(data));
    RngStream rng(7, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(recurrent_hypothesis(cfg, u, 0.3, &rng));
    }
}
BENCHMARK(BM_NoisyRecurrentReadout)->Arg(4)->Arg(16)->Arg(64);

void BM_TvGaussianClosedForm(benchmark::State& state) {
    const RealVec a{0.1, -0.2, 0.3}, b{-0.1, 0.4, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(tv_gaussian_pair(a, b, 0.5));
    }
}
BENCHMARK(BM_TvGaussianClosedForm);

void BM_TvMixtureMc(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const GaussianMixture m1 = make_mixture(2, 0.5, {{0.0, 0.0}, {0.5, 0.2}});
    const GaussianMixture m2 = make_mixture(2, 0.5, {{0.1, 0.0}, {0.4, 0.3}});
    RngStream rng(7, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            tv_mixture_mc(m1.handle(), m2.handle(), n, rng));
    }
}
BENCHMARK(BM_TvMixtureMc)->Arg(1000)->Arg(10000);

void BM_SampleComplexityUpper(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_complexity_upper(19, 64, 0.01, 0.1, 0.1, 0.1));
    }
}
BENCHMARK(BM_SampleComplexityUpper);

void BM_FixedNoiseGrad(benchmark::State& state) {
    const std::size_t q = 2, p = 2, s = p + q - 1, T = 4;
    const MLPSpec spec = bench_block(s, q);
    SampleSet S;
    RngStream rng(7, 3);
    for (std::size_t i = 0; i < 16; ++i) {
        RealVec data(p * T);
        RngStream st = rng.substream(i);
        for (double& v : data) v = st.next_unit() - 0.5;
        S.items.push_back(
            make_labeled(make_sequence(p, T, std::move(data)),
                         i % 2 ? 1.0 : -1.0));
    }
    const TrainProblem prob{q, p, T, false, 0.1, 0.3, 4, RngStream(7, 4)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fixed_noise_risk_grad(prob, S, spec));
    }
}
BENCHMARK(BM_FixedNoiseGrad);

} // namespace

BENCHMARK_MAIN();
