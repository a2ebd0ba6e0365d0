#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "polymac/attack_game.hpp"
#include "polymac/distributions.hpp"
#include "polymac/mac.hpp"
#include "polymac/prime_field.hpp"

using namespace polymac;

static void BM_FieldMul(benchmark::State& state) {
    const PrimeModulus m(2147483647);
    FieldElement x(m, 123456789), y(m, 987654321);
    for (auto _ : state) {
        x = x * y;
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_FieldMul);

static void BM_EvalF(benchmark::State& state) {
    const PrimeModulus m(2147483647);
    const auto len = static_cast<std::size_t>(state.range(0));
    const MacParams params(m, len);
    std::vector<std::uint64_t> values(len);
    for (std::size_t i = 0; i < len; ++i) values[i] = 1000003 * (i + 1);
    const Message msg = Message::from_values(m, values);
    const FieldElement k1(m, 31337);
    for (auto _ : state) benchmark::DoNotOptimize(eval_f(params, msg, k1));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(len));
}
BENCHMARK(BM_EvalF)->Arg(1)->Arg(16)->Arg(256);

static void BM_ExactAdaptive(benchmark::State& state) {
    const auto p = static_cast<std::uint64_t>(state.range(0));
    const MacParams params(PrimeModulus(p), 2);
    const Distribution u = Distribution::uniform(p);
    const Distribution skew = extremal_distribution(p, DistanceValue(Rational(1, static_cast<std::int64_t>(p)), p));
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_advantage_adaptive(params, skew, u, 2, ProbeMode::full_length));
    }
}
BENCHMARK(BM_ExactAdaptive)->Arg(5)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
    const MacParams params(PrimeModulus(5), 1);
    const Distribution u = Distribution::uniform(5);
    EnumerationOptions opts;
    const AdversaryStrategy strategy = AdversaryStrategy::adaptive_optimal(optimal_adaptive(params, u, u, opts));
    const std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_advantage(params, u, u, strategy, trials, seed++, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
