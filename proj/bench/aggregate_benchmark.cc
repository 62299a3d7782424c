// Copyright 2026 The dprank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Ballot aggregation should scale as O(MN + M log M).

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "dprank/ranking.h"

namespace dprank {
namespace {

void BM_AggregateBallots(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int64_t n = state.range(1);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int64_t> pick(0, Factorial(m) - 1);
  std::vector<Permutation> ballots;
  ballots.reserve(n);
  for (int64_t i = 0; i < n; ++i) ballots.push_back(*PermutationAt(m, pick(rng)));
  const PositionalRule rule = PositionalRule::Borda(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AggregateBallots(rule, ballots));
  }
  state.SetComplexityN(m * n);
}
BENCHMARK(BM_AggregateBallots)
    ->ArgsProduct({{3, 5, 8}, {1 << 10, 1 << 14, 1 << 18}})
    ->Complexity(benchmark::oN);

}  // namespace
}  // namespace dprank

BENCHMARK_MAIN();
