#include <benchmark/benchmark.h>

#include "dcc/ensemble.hpp"
#include "dcc/nb_chain.hpp"
#include "dcc/synth.hpp"

namespace {

const dcc::multi_label_dataset &bench_data() {
    static const auto ds = dcc::generate({.n = 600, .d = 20, .l = 6, .dependence = 0.8, .noise = 0.1, .seed = {7}});
    return ds;
}

const dcc::ensemble &bench_ensemble(dcc::base_classifier base) {
    static const auto make = [](dcc::base_classifier b) {
        dcc::ensemble_config c;
        c.base = b;
        c.beta = 1.0;
        c.r = 5;
        c.seed = {11};
        return dcc::build_ensemble(bench_data(), c);
    };
    static const auto nb = make(dcc::base_classifier::naive_bayes);
    static const auto knn = make(dcc::base_classifier::nearest_neighbour);
    return base == dcc::base_classifier::naive_bayes ? nb : knn;
}

void predict_batch(benchmark::State &state, dcc::base_classifier base, dcc::execution exec) {
    const auto &ens = bench_ensemble(base);
    const auto &x = bench_data().features();
    for (auto _ : state) {
        benchmark::DoNotOptimize(dcc::predict_ensemble_batch(ens, x, exec));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.rows()));
}

void build(benchmark::State &state, dcc::execution exec) {
    dcc::ensemble_config c;
    c.beta = 1.0;
    c.seed = {3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dcc::build_ensemble(bench_data(), c, exec));
    }
}

// reordering a fitted chain vs refitting one per order
void nb_reorder(benchmark::State &state) {
    const auto &ens = bench_ensemble(dcc::base_classifier::naive_bayes);
    const auto &model = std::get<dcc::nb_chain_model>(ens.members.front().model);
    const auto x = bench_data().features().row(0);
    std::uint64_t s = 0;
    for (auto _ : state) {
        const auto pi = dcc::label_permutation::random(model.label_count, {++s});
        benchmark::DoNotOptimize(dcc::predict_chain_nb(model, x, pi));
    }
}

}  // namespace

BENCHMARK_CAPTURE(predict_batch, nb_serial, dcc::base_classifier::naive_bayes, dcc::execution::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(predict_batch, nb_parallel, dcc::base_classifier::naive_bayes, dcc::execution::parallel)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK_CAPTURE(predict_batch, knn_serial, dcc::base_classifier::nearest_neighbour, dcc::execution::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(predict_batch, knn_parallel, dcc::base_classifier::nearest_neighbour, dcc::execution::parallel)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK_CAPTURE(build, serial, dcc::execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(build, parallel, dcc::execution::parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(nb_reorder);

BENCHMARK_MAIN();
