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

#ifndef DPRANK_PRIVACY_H_
#define DPRANK_PRIVACY_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "dprank/random.h"
#include "dprank/ranking.h"

namespace dprank {

// Below this epsilon the noise swamps any histogram and error rates sit at
// the random-guess level. Allowed, but callers should warn.
inline constexpr double kSaturatingEpsilon = 1e-6;

// (epsilon, delta) guarantee for a histogram query over `voters` ballots.
class PrivacyParams {
 public:
  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta,
                                              int64_t voters);
  // delta = delta_scale / voters.
  static absl::StatusOr<PrivacyParams> WithDeltaScale(double epsilon,
                                                      double delta_scale,
                                                      int64_t voters);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  int64_t voters() const { return voters_; }

  bool saturated() const { return epsilon_ < kSaturatingEpsilon; }

 private:
  PrivacyParams(double epsilon, double delta, int64_t voters)
      : epsilon_(epsilon), delta_(delta), voters_(voters) {}

  double epsilon_;
  double delta_;
  int64_t voters_;
};

// Per-coordinate noise standard deviation on the count scale:
// sqrt(2 ln(2/delta)) / epsilon, the Gaussian-mechanism calibration at unit
// l2 sensitivity.
double Sigma(const PrivacyParams& params);

// Same noise on the distribution scale, Sigma / N.
double SigmaHat(const PrivacyParams& params);

// Adding or removing one ballot moves exactly one histogram cell by one.
constexpr double L2Sensitivity() { return 1.0; }

absl::StatusOr<double> L2Distance(const Histogram& a, const Histogram& b);

template <typename T>
struct NoisySample {
  T value;
  RngSeed seed;
};

// q + N(0, sigma^2 I). Counts are not clamped and may go negative.
NoisySample<Histogram> AddNoise(const Histogram& h, const PrivacyParams& params,
                                RngSeed seed);

// v + N(0, sigmaHat^2 I). Uses the same standard-normal draws as AddNoise for
// a given seed, so the two paths differ only by the 1/N rescaling.
NoisySample<VoteDistribution> AddNoiseNormalized(const VoteDistribution& v,
                                                 const PrivacyParams& params,
                                                 RngSeed seed);

}  // namespace dprank

#endif  // DPRANK_PRIVACY_H_
