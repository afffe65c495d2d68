/*
 Copyright 2026 The disevo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <benchmark/benchmark.h>

#include <string>

#include "disevo/counting.hpp"
#include "disevo/models.hpp"
#include "disevo/random.hpp"

namespace {

using namespace disevo;

// Ring slab q -> q where vertex i touches i and i+1 above it.
SlabSpec ring_slab(std::size_t q) {
    SlabSpec s;
    s.q_prev = s.q_next = q;
    s.adjacency.assign(q, std::vector<int>(q, 0));
    for (std::size_t i = 0; i < q; ++i) {
        s.adjacency[i][i] = 1;
        s.adjacency[i][(i + 1) % q] = 1;
    }
    return s;
}

template <class T>
void BM_RankNullspace(benchmark::State& state) {
    RandomSource rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    auto m = rng.low_rank<T>(n, n, n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(rank_nullspace(m));
}
BENCHMARK(BM_RankNullspace<Rational>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_RankNullspace<double>)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

template <class T>
void BM_MatchAndPropagate(benchmark::State& state) {
    const auto q = static_cast<std::size_t>(state.range(0));
    std::vector<QuadraticAction<T>> moves;
    // Alternate a ring slab with a slab that loses one vertex and one that gains it back.
    SlabSpec shrink;
    shrink.q_prev = q;
    shrink.q_next = q - 1;
    shrink.adjacency.assign(q, std::vector<int>(q - 1, 0));
    for (std::size_t i = 0; i < q; ++i) shrink.adjacency[i][i % (q - 1)] = 1 + (i == q - 1);
    std::vector<SlabSpec> slabs = {ring_slab(q), shrink, shrink.transposed(), ring_slab(q)};
    for (std::size_t k = 0; k < slabs.size(); ++k)
        moves.push_back(cdt_slab_action<T>(slabs[k], std::to_string(k), std::to_string(k + 1)));
    Schedule<T> sch(std::move(moves));
    for (auto _ : state) benchmark::DoNotOptimize(match_and_propagate(sch));
}
BENCHMARK(BM_MatchAndPropagate<Rational>)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_MatchAndPropagate<double>)->Arg(4)->Arg(8)->Arg(12)->Arg(24);

template <class T>
void BM_EffectiveAction(benchmark::State& state) {
    RandomSource rng(2);
    const auto q = static_cast<std::size_t>(state.range(0));
    auto s1 = random_action<T>(rng, numbered_slice("0", q), numbered_slice("1", q));
    auto s2 = random_action<T>(rng, s1.next, numbered_slice("2", q));
    for (auto _ : state) benchmark::DoNotOptimize(effective_action(s1, s2));
}
BENCHMARK(BM_EffectiveAction<Rational>)->Arg(3)->Arg(5)->Arg(10);
BENCHMARK(BM_EffectiveAction<double>)->Arg(3)->Arg(5)->Arg(10)->Arg(20);

template <class T>
void BM_PachnerRun(benchmark::State& state) {
    auto sc = load_scenario(std::string(DISEVO_SCENARIO_DIR) + "/pachner-run-2d.json");
    for (auto _ : state) benchmark::DoNotOptimize(run_surface<T>(sc));
}
BENCHMARK(BM_PachnerRun<Rational>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PachnerRun<double>)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
