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

#include "dprank/privacy.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "dprank/status.h"

namespace dprank {

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta,
                                                    int64_t voters) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (voters < 1) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("need at least one voter, got ", voters));
  }
  return PrivacyParams(epsilon, delta, voters);
}

absl::StatusOr<PrivacyParams> PrivacyParams::WithDeltaScale(double epsilon,
                                                            double delta_scale,
                                                            int64_t voters) {
  if (voters < 1) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("need at least one voter, got ", voters));
  }
  return Create(epsilon, delta_scale / static_cast<double>(voters), voters);
}

double Sigma(const PrivacyParams& params) {
  return std::sqrt(2.0 * std::log(2.0 / params.delta())) * L2Sensitivity() /
         params.epsilon();
}

double SigmaHat(const PrivacyParams& params) {
  return Sigma(params) / static_cast<double>(params.voters());
}

absl::StatusOr<double> L2Distance(const Histogram& a, const Histogram& b) {
  if (a.num_candidates() != b.num_candidates()) {
    return MakeError(ErrorKind::kDimension, "histograms disagree on M");
  }
  double sum = 0.0;
  for (int64_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

NoisySample<Histogram> AddNoise(const Histogram& h, const PrivacyParams& params,
                                RngSeed seed) {
  const double sigma = Sigma(params);
  const std::vector<double> z = StandardNormalVector(seed, h.size());
  std::vector<double> noisy(h.counts().begin(), h.counts().end());
  for (size_t k = 0; k < noisy.size(); ++k) noisy[k] += sigma * z[k];
  return {*Histogram::Create(h.num_candidates(), std::move(noisy)), seed};
}

NoisySample<VoteDistribution> AddNoiseNormalized(const VoteDistribution& v,
                                                 const PrivacyParams& params,
                                                 RngSeed seed) {
  const double sigma_hat = SigmaHat(params);
  const std::vector<double> z = StandardNormalVector(seed, v.size());
  std::vector<double> noisy(v.weights().begin(), v.weights().end());
  for (size_t k = 0; k < noisy.size(); ++k) noisy[k] += sigma_hat * z[k];
  return {*VoteDistribution::Create(v.num_candidates(), std::move(noisy)),
          seed};
}

}  // namespace dprank
