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

#ifndef DPRANK_RANDOM_H_
#define DPRANK_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dprank {

struct RngSeed {
  uint64_t value = 0;
  friend bool operator==(RngSeed, RngSeed) = default;
};

using Engine = std::mt19937_64;

uint64_t SplitMix64(uint64_t x);

// Independent stream for (master, stream index). Parallel trials use this so
// that results do not depend on scheduling.
RngSeed DeriveSeed(RngSeed master, uint64_t stream);

Engine MakeEngine(RngSeed seed);

// n i.i.d. N(0, 1) draws, fully determined by `seed`.
std::vector<double> StandardNormalVector(RngSeed seed, int64_t n);

// Uniform point on the unit simplex in R^dim: i.i.d. Exp(1) draws divided by
// their sum.
std::vector<double> SampleSimplexUniform(int64_t dim, Engine& rng);

}  // namespace dprank

#endif  // DPRANK_RANDOM_H_
