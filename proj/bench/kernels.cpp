#include <benchmark/benchmark.h>

#include <random>

#include "corpus.hpp"
#include "tropembed/balancer.hpp"
#include "tropembed/errors.hpp"

using namespace tropembed;

namespace {

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

// n random segments between lattice points of a 64 x 64 box, general enough
// that the crossing kernel stays on its proper-crossing path
BalancedComplex random_segments(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(0, 4096);
  BalancedComplex c;
  while (c.segments.size() < n) {
    auto a = c.add_vertex({Scalar(Rational(coord(rng), 64)), Scalar(Rational(coord(rng), 64))});
    auto b = c.add_vertex({Scalar(Rational(coord(rng), 64)), Scalar(Rational(coord(rng), 64))});
    c.add_segment(a, b);
  }
  return c;
}

void BM_Crossings(benchmark::State& state) {
  const auto c = random_segments(static_cast<std::size_t>(state.range(1)), 7);
  const auto all = all_elements(c);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(crossings(c, all, exec_of(state)));
    } catch (const Error&) {
      // a degenerate random instance costs the same as a clean one
    }
  }
}
BENCHMARK(BM_Crossings)->ArgsProduct({{0, 1}, {200, 800}})->Unit(benchmark::kMillisecond);

LayoutGraph complete_bipartite(std::size_t a, std::size_t b) {
  LayoutGraph g;
  g.n = a + b;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) g.edges.push_back({i, a + j});
  }
  return g;
}

LayoutGraph complete(std::size_t n) {
  LayoutGraph g;
  g.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  }
  return g;
}

void BM_ExactCrossingNumber(benchmark::State& state) {
  const LayoutGraph g = state.range(1) == 0 ? complete(5) : (state.range(1) == 1 ? complete_bipartite(3, 3) : complete(6));
  for (auto _ : state) benchmark::DoNotOptimize(crossing_number_exact(g, 50'000'000, exec_of(state)));
}
BENCHMARK(BM_ExactCrossingNumber)->ArgsProduct({{0, 1}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

// unit grid of side n; every third segment gets a corridor
void BM_PlaceCorridors(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  BalancedComplex c;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c.add_vertex({Scalar(static_cast<std::int64_t>(i)), Scalar(static_cast<std::int64_t>(j))});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + 1 < n) c.add_segment(i * n + j, (i + 1) * n + j);
      if (j + 1 < n) c.add_segment(i * n + j, i * n + j + 1);
    }
  }
  std::vector<std::size_t> hosts;
  for (std::size_t s = 0; s < c.segments.size(); s += 3) hosts.push_back(s);
  for (auto _ : state) benchmark::DoNotOptimize(place_corridors(c, hosts, std::nullopt, exec_of(state)));
}
BENCHMARK(BM_PlaceCorridors)->ArgsProduct({{0, 1}, {6, 10}})->Unit(benchmark::kMillisecond);

void BM_Embed(benchmark::State& state) {
  const MetricGraph g = corpus::complete(5);
  EmbedOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(embed_isometric(g, o));
}
BENCHMARK(BM_Embed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
