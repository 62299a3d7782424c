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

#ifndef DPRANK_NUMERIC_H_
#define DPRANK_NUMERIC_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace dprank {

inline constexpr double kSqrt2 = 1.41421356237309504880;

struct ScalarMinimum {
  double argmin;
  double value;
  int evaluations;
};

// Golden-section search for a minimum of `f` on [lo, hi]; stops once the
// bracket is narrower than `abs_tolerance`. Finds the global minimum only for
// unimodal f.
ScalarMinimum GoldenSectionMinimize(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double abs_tolerance);

// Composite Simpson rule over uniformly spaced samples. An odd number of
// intervals closes with a Simpson 3/8 panel. Needs at least two samples
// (a single interval falls back to the trapezoid rule).
double SimpsonUniform(std::span<const double> samples, double spacing);

// Samples f at `nodes` uniform points of [a, b] and applies SimpsonUniform.
double SimpsonIntegrate(const std::function<double(double)>& f, double a,
                        double b, int nodes);

// Runs body(i) for i in [0, count) on up to `threads` workers. Work is handed
// out dynamically, so body must not depend on which thread runs it.
template <typename Body>
void ParallelFor(int64_t count, int threads, Body body) {
  if (threads <= 1 || count <= 1) {
    for (int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      body(i);
    }
  };
  std::vector<std::jthread> pool;
  const int64_t n = std::min<int64_t>(threads, count);
  pool.reserve(n);
  for (int64_t t = 0; t < n; ++t) pool.emplace_back(worker);
}

// Default worker count: hardware concurrency, at least 1.
int DefaultThreads();

}  // namespace dprank

#endif  // DPRANK_NUMERIC_H_
