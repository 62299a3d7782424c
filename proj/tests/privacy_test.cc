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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "dprank/random.h"
#include "dprank/ranking.h"
#include "dprank/status.h"

namespace dprank {
namespace {

TEST(PrivacyParamsTest, Validation) {
  EXPECT_TRUE(PrivacyParams::Create(0.1, 5e-4, 2000).ok());
  for (auto [eps, delta, n] : {std::tuple{0.0, 0.1, 10L},
                              std::tuple{-1.0, 0.1, 10L},
                              std::tuple{0.1, 0.0, 10L},
                              std::tuple{0.1, 1.0, 10L},
                              std::tuple{0.1, 0.1, 0L}}) {
    absl::StatusOr<PrivacyParams> p = PrivacyParams::Create(eps, delta, n);
    ASSERT_FALSE(p.ok());
    EXPECT_EQ(ErrorKindOf(p.status()), ErrorKind::kDomain);
  }
  EXPECT_FALSE(PrivacyParams::Create(NAN, 0.1, 10).ok());
  const PrivacyParams scaled = *PrivacyParams::WithDeltaScale(0.1, 0.1, 1000);
  EXPECT_DOUBLE_EQ(scaled.delta(), 1e-4);
  EXPECT_TRUE(PrivacyParams::Create(1e-7, 0.1, 10)->saturated());
  EXPECT_FALSE(PrivacyParams::Create(1e-5, 0.1, 10)->saturated());
}

TEST(SigmaTest, FrozenValues) {
  // 50-digit evaluation of sqrt(2 ln(2/delta)) / epsilon.
  const PrivacyParams p = *PrivacyParams::Create(0.1, 5e-4, 2000);
  EXPECT_NEAR(Sigma(p), 40.72849037247029530733, 1e-12);
  EXPECT_NEAR(SigmaHat(p), 40.72849037247029530733 / 2000, 1e-15);
  // Tighter delta needs more noise; larger epsilon needs less.
  EXPECT_GT(Sigma(*PrivacyParams::Create(0.1, 1e-6, 2000)), Sigma(p));
  EXPECT_LT(Sigma(*PrivacyParams::Create(0.2, 5e-4, 2000)), Sigma(p));
  EXPECT_DOUBLE_EQ(Sigma(*PrivacyParams::Create(0.2, 5e-4, 2000)),
                   Sigma(p) / 2);
}

TEST(SensitivityTest, OneBallotMovesOneCoordinateByOne) {
  EXPECT_EQ(L2Sensitivity(), 1.0);
  Histogram h = *Histogram::Create(3, {3, 1, 0, 0, 1, 1});
  for (int64_t k = 0; k < 6; ++k) {
    Histogram added = h;
    ASSERT_TRUE(added.Add(*PermutationAt(3, k)).ok());
    EXPECT_EQ(*L2Distance(h, added), 1.0);
    Histogram removed = h;
    ASSERT_TRUE(removed.Add(*PermutationAt(3, k), -1.0).ok());
    EXPECT_EQ(*L2Distance(h, removed), 1.0);
  }
  Histogram two = h;
  ASSERT_TRUE(two.Add(*PermutationAt(3, 0)).ok());
  ASSERT_TRUE(two.Add(*PermutationAt(3, 1)).ok());
  EXPECT_DOUBLE_EQ(*L2Distance(h, two), std::sqrt(2.0));
  EXPECT_FALSE(L2Distance(h, *Histogram::Zeros(4)).ok());
}

TEST(AddNoiseTest, DeterministicPerSeed) {
  const Histogram h = *Histogram::Create(4, std::vector<double>(24, 5.0));
  const PrivacyParams p = *PrivacyParams::Create(0.5, 1e-3, 120);
  const auto a = AddNoise(h, p, RngSeed{42});
  const auto b = AddNoise(h, p, RngSeed{42});
  const auto c = AddNoise(h, p, RngSeed{43});
  EXPECT_EQ(std::vector<double>(a.value.counts().begin(), a.value.counts().end()),
            std::vector<double>(b.value.counts().begin(), b.value.counts().end()));
  EXPECT_NE(a.value.counts()[0], c.value.counts()[0]);
  EXPECT_EQ(a.seed, RngSeed{42});
}

TEST(AddNoiseTest, PerCoordinateVarianceWithinFivePercent) {
  // 10^5 draws per coordinate: spread across many seeds of a six-vector.
  const Histogram h = *Histogram::Create(3, {10, 0, 4, 0, 0, 2});
  const PrivacyParams p = *PrivacyParams::Create(0.1, 5e-4, 2000);
  const double sigma = Sigma(p);
  constexpr int kDraws = 100000;
  std::vector<double> sum(6, 0.0), sum_sq(6, 0.0);
  for (int d = 0; d < kDraws; ++d) {
    const auto noisy = AddNoise(h, p, DeriveSeed(RngSeed{99}, d));
    for (int k = 0; k < 6; ++k) {
      const double e = noisy.value[k] - h[k];
      sum[k] += e;
      sum_sq[k] += e * e;
    }
  }
  for (int k = 0; k < 6; ++k) {
    const double mean = sum[k] / kDraws;
    const double var = sum_sq[k] / kDraws - mean * mean;
    EXPECT_LT(std::abs(mean), 5 * sigma / std::sqrt(kDraws)) << k;
    EXPECT_NEAR(var / (sigma * sigma), 1.0, 0.05) << k;
  }
}

TEST(AddNoiseNormalizedTest, MatchesScaledCountsBitForBitAtPowerOfTwo) {
  // Division by a power of two is exact, so both paths round identically.
  constexpr int64_t kVoters = 2048;
  std::vector<double> counts = {700, 300, 148, 400, 250, 250};
  const Histogram q = *Histogram::Create(3, counts);
  const VoteDistribution v = *Normalize(q);
  const PrivacyParams p = *PrivacyParams::Create(0.1, 5e-4, kVoters);
  for (uint64_t s = 0; s < 200; ++s) {
    const auto noisy_counts = AddNoise(q, p, RngSeed{s});
    const auto noisy_v = AddNoiseNormalized(v, p, RngSeed{s});
    for (int k = 0; k < 6; ++k) {
      ASSERT_EQ(noisy_counts.value[k] / kVoters, noisy_v.value[k])
          << "seed " << s << " coordinate " << k;
    }
  }
}

TEST(AddNoiseNormalizedTest, MatchesScaledCountsToRoundingAndSameRanking) {
  constexpr int64_t kVoters = 2000;
  const Histogram q = *Histogram::Create(3, {700, 300, 100, 400, 250, 250});
  const VoteDistribution v = *Normalize(q);
  const PrivacyParams p = *PrivacyParams::Create(0.1, 5e-4, kVoters);
  const PositionalRule borda = PositionalRule::Borda(3);
  for (uint64_t s = 0; s < 500; ++s) {
    const auto noisy_counts = AddNoise(q, p, RngSeed{s});
    const auto noisy_v = AddNoiseNormalized(v, p, RngSeed{s});
    for (int k = 0; k < 6; ++k) {
      // A few roundings on terms as large as max(v, |noise|).
      const double a = noisy_counts.value[k] / kVoters;
      const double scale = std::max(v[k], std::abs(noisy_v.value[k] - v[k]));
      EXPECT_NEAR(a, noisy_v.value[k],
                  4 * std::numeric_limits<double>::epsilon() * scale);
    }
    EXPECT_EQ(Aggregate(borda, noisy_counts.value)->order,
              Aggregate(borda, noisy_v.value)->order);
  }
}

}  // namespace
}  // namespace dprank
