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

#include "dprank/random.h"

#include <numeric>

namespace dprank {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngSeed DeriveSeed(RngSeed master, uint64_t stream) {
  return RngSeed{SplitMix64(SplitMix64(master.value) ^ SplitMix64(~stream))};
}

Engine MakeEngine(RngSeed seed) { return Engine(seed.value); }

std::vector<double> StandardNormalVector(RngSeed seed, int64_t n) {
  Engine rng = MakeEngine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n);
  for (double& x : z) x = normal(rng);
  return z;
}

std::vector<double> SampleSimplexUniform(int64_t dim, Engine& rng) {
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> x(dim);
  for (double& e : x) e = exponential(rng);
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& e : x) e /= total;
  return x;
}

}  // namespace dprank
