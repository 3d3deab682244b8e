#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "hjw/coloring.hpp"
#include "hjw/equiv.hpp"
#include "hjw/exact.hpp"
#include "hjw/search.hpp"
#include "hjw/subspaces.hpp"
#include "hjw/words.hpp"

namespace {

using namespace hjw;

void BM_rank_roundtrip(benchmark::State& state) {
    const Ground g{static_cast<int>(state.range(0))};
    const Alphabet k{3};
    const std::uint64_t n = space_size(g, k);
    std::uint64_t r = 0;
    for (auto _ : state) {
        const Word w = unrank_word(r, g, k);
        benchmark::DoNotOptimize(rank_word(w, k));
        r = (r + 7919) % n;
    }
}
BENCHMARK(BM_rank_roundtrip)->Arg(8)->Arg(16);

void BM_subspace_enumeration(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::uint64_t count = 0;
        for_each_convex_subspace(Ground{m}, Alphabet{2}, 2, [&](const ConvexSubspace&) {
            ++count;
            return false;
        });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_subspace_enumeration)->Arg(6)->Arg(8);

void BM_orbit_full_sym(benchmark::State& state) {
    const Word w = {0, 1, 2, 0, 1, 2, 0, 1};
    const PermGroup g = PermGroup::full_sym(static_cast<int>(w.size()));
    for (auto _ : state) {
        benchmark::DoNotOptimize(orbit_of(w, g));
    }
}
BENCHMARK(BM_orbit_full_sym);

void BM_find_mono_subspace(benchmark::State& state) {
    const Coloring c = Coloring::random(Ground{7}, Alphabet{2}, ColorSet{2},
                                        static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_mono_subspace(c, 2));
    }
}
BENCHMARK(BM_find_mono_subspace)->Arg(1)->Arg(12);

void BM_exact_hj_1_2_2(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_number(NumberKind::hj(1, 2, 2)));
    }
}
BENCHMARK(BM_exact_hj_1_2_2);

void BM_exact_vdw_1_3_2(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_number(NumberKind::vdw(1, 3, 2)));
    }
}
BENCHMARK(BM_exact_vdw_1_3_2);

}  // namespace

BENCHMARK_MAIN();
