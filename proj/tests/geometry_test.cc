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

#include "dprank/geometry.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "dprank/numeric.h"
#include "dprank/ranking.h"
#include "dprank/status.h"

namespace dprank {
namespace {

std::vector<double> InCyclicOrder(std::span<const double> lex) {
  std::vector<double> out(6);
  for (int64_t k = 0; k < 6; ++k) {
    out[*PaperOrderIndex(*PermutationAt(3, k))] = lex[k];
  }
  return out;
}

TEST(HyperplaneTest, BordaThreeCoefficientsMatchTextbookEquations) {
  const PositionalRule borda = PositionalRule::Borda(3);
  struct Case {
    int i, j;
    std::vector<double> doubled;
  };
  for (const Case& c : {Case{0, 1, {1, 2, 1, -1, -2, -1}},
                        Case{1, 2, {1, -1, -2, -1, 1, 2}},
                        Case{0, 2, {2, 1, -1, -2, -1, 1}}}) {
    const Hyperplane h = *Hyperplane::ForPair(borda, c.i, c.j);
    std::vector<double> got = InCyclicOrder(h.coefficients());
    for (double& x : got) x *= 2;
    EXPECT_EQ(got, c.doubled) << c.i << c.j;
    const double norm = std::sqrt(std::inner_product(
        c.doubled.begin(), c.doubled.end(), c.doubled.begin(), 0.0));
    const std::vector<double> normal = InCyclicOrder(h.normal());
    for (int k = 0; k < 6; ++k) {
      EXPECT_NEAR(normal[k], c.doubled[k] / norm, 1e-15);
    }
  }
}

// 1, 0.3, ..., 0.3, 0: a valid custom rule for any M.
std::vector<double> TaperedScores(int m) {
  std::vector<double> scores(m, 0.3);
  scores.front() = 1.0;
  scores.back() = 0.0;
  return scores;
}

TEST(HyperplaneTest, InvariantsForEveryRuleAndPair) {
  for (int m = 3; m <= 5; ++m) {
    for (const PositionalRule& rule :
         {PositionalRule::Borda(m), PositionalRule::Plurality(m),
          *PositionalRule::Custom(TaperedScores(m))}) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          absl::StatusOr<Hyperplane> h = Hyperplane::ForPair(rule, i, j);
          ASSERT_TRUE(h.ok());
          double norm_sq = 0.0, sum = 0.0;
          for (double b : h->normal()) {
            norm_sq += b * b;
            sum += b;
          }
          EXPECT_NEAR(norm_sq, 1.0, 1e-14);
          EXPECT_NEAR(sum, 0.0, 1e-14);
          const std::vector<double> centroid(Factorial(m), 1.0 / Factorial(m));
          EXPECT_NEAR(*SignedDistance(centroid, *h), 0.0, 1e-15);
        }
      }
    }
  }
}

TEST(HyperplaneTest, Errors) {
  absl::StatusOr<Hyperplane> same =
      Hyperplane::ForPair(PositionalRule::Borda(3), 1, 1);
  ASSERT_FALSE(same.ok());
  EXPECT_EQ(ErrorKindOf(same.status()), ErrorKind::kInvalidPair);
  EXPECT_FALSE(Hyperplane::ForPair(PositionalRule::Borda(3), 0, 3).ok());
  EXPECT_FALSE(Hyperplane::FromNormal({0, 0, 0}).ok());
  EXPECT_FALSE(Hyperplane::FromNormal({1, 1, -1}).ok());
  EXPECT_FALSE(SignedDistance(std::vector<double>(5, 0.2),
                              *Hyperplane::FromNormal({1, -1, 0, 0, 0, 0}))
                   .ok());
}

TEST(SignedDistanceTest, PointMassAndReversal) {
  const PositionalRule borda = PositionalRule::Borda(3);
  const Hyperplane ab = *Hyperplane::ForPair(borda, 0, 1);
  std::vector<double> abc(6, 0.0);
  abc[PermutationIndex(*Permutation::Create({0, 1, 2}))] = 1.0;
  EXPECT_NEAR(*SignedDistance(abc, ab), 1.0 / std::sqrt(12.0), 1e-15);

  std::vector<double> v = {0.3, 0.05, 0.2, 0.1, 0.15, 0.2};
  std::vector<double> reversed(6);
  for (int64_t k = 0; k < 6; ++k) {
    reversed[PermutationIndex(PermutationAt(3, k)->Reversed())] = v[k];
  }
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
    const Hyperplane h = *Hyperplane::ForPair(borda, i, j);
    EXPECT_NEAR(*SignedDistance(v, h), -*SignedDistance(reversed, h), 1e-15);
  }
}

TEST(HyperplaneTest, SupportIsCoordinateRange) {
  const Hyperplane ab = *Hyperplane::ForPair(PositionalRule::Borda(3), 0, 1);
  auto [lo, hi] = ab.Support();
  EXPECT_NEAR(lo, -2 / std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(hi, 2 / std::sqrt(12.0), 1e-15);
}

TEST(CrossSectionTest, CentralSliceOfRegularSimplex) {
  for (int n : {6, 24, 120, 720}) {
    std::vector<double> dir(n, 0.0);
    dir[0] = 1.0;
    dir[1] = -1.0;
    const Hyperplane h = *Hyperplane::FromNormal(dir);
    EXPECT_NEAR(*SliceDensity(h, 0.0), (n - 1) / kSqrt2, 1e-10 * n);
    const double expected_log =
        0.5 * std::log(n) - 0.5 * std::log(2.0) - std::lgamma(n - 1.0);
    EXPECT_NEAR(*LogCrossSectionVolume(h, 0.0), expected_log, 1e-10);
    if (n <= 120) {
      EXPECT_NEAR(*CrossSectionVolume(h, 0.0), std::exp(expected_log),
                  1e-10 * std::exp(expected_log));
    }
  }
}

TEST(CrossSectionTest, ZeroOutsideTheSlab) {
  const Hyperplane ab = *Hyperplane::ForPair(PositionalRule::Borda(3), 0, 1);
  for (double offset : {kSqrt2, -kSqrt2, 1.5, -3.0, 0.58, -0.58}) {
    EXPECT_EQ(*SliceDensity(ab, offset), 0.0) << offset;
    EXPECT_EQ(*CrossSectionVolume(ab, offset), 0.0) << offset;
  }
}

TEST(SliceDensityTest, FrozenSplineValues) {
  // Independent B-spline evaluation over the sorted normal coordinates.
  struct Case {
    PositionalRule rule;
    double expected[3];
  };
  const Case cases[] = {
      {PositionalRule::Borda(3),
       {2.40562612162344, 2.073072366570216, 1.241687978937155}},
      {PositionalRule::Plurality(3), {2.5, 2.048, 1.188}},
      {PositionalRule::Borda(4),
       {9.680503355107625, 0.4793476481999163, 2.0131906147511194e-05}},
  };
  for (const Case& c : cases) {
    const Hyperplane h = *Hyperplane::ForPair(c.rule, 0, 1);
    const double offsets[] = {0.0, 0.1, 0.2};
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(*SliceDensity(h, offsets[k]), c.expected[k],
                  1e-9 * c.expected[k])
          << c.rule.ToString() << " M=" << c.rule.num_candidates() << " l="
          << offsets[k];
    }
  }
}

TEST(SliceDensityTest, AgreesWithMonteCarloSlabs) {
  const Hyperplane ab = *Hyperplane::ForPair(PositionalRule::Borda(3), 0, 1);
  const std::vector<double> offsets = {0.0, 0.05, 0.1, 0.2};
  const std::vector<SlabEstimate> mc = EstimateSliceDensityMonteCarlo(
      ab, offsets, 2e-3, 1'000'000, RngSeed{2024}, 1);
  ASSERT_EQ(mc.size(), offsets.size());
  for (const SlabEstimate& e : mc) {
    const double exact = *SliceDensity(ab, e.offset);
    EXPECT_LT(std::abs(e.density - exact), 3 * e.standard_error)
        << "offset " << e.offset;
    EXPECT_EQ(e.samples, 1'000'000);
  }
}

TEST(SliceDensityTest, MonteCarloIsThreadCountInvariant) {
  const Hyperplane ab = *Hyperplane::ForPair(PositionalRule::Borda(3), 0, 1);
  const std::vector<double> offsets = {0.0, 0.1};
  const auto one = EstimateSliceDensityMonteCarlo(ab, offsets, 1e-2, 100000,
                                                  RngSeed{5}, 1);
  const auto four = EstimateSliceDensityMonteCarlo(ab, offsets, 1e-2, 100000,
                                                   RngSeed{5}, 4);
  for (size_t k = 0; k < offsets.size(); ++k) {
    EXPECT_EQ(one[k].hits, four[k].hits);
  }
}

class DistanceDensityTest
    : public ::testing::TestWithParam<std::pair<const char*, int>> {
 protected:
  PositionalRule Rule() const {
    return *PositionalRule::Parse(GetParam().first, GetParam().second);
  }
};

TEST_P(DistanceDensityTest, HalfMassSymmetryAndPeakAtZero) {
  const DistanceDensity d = *DistanceDensity::Build(Rule());
  ASSERT_TRUE(d.exact());
  EXPECT_NEAR(d.HalfMass(), 0.5, 1e-6);
  const double peak = d(0.0);
  const int64_t n = Factorial(Rule().num_candidates());
  EXPECT_LE(peak, (n - 1) / kSqrt2);
  for (double l : d.grid()) {
    EXPECT_EQ(d(l), d(-l));
    if (l > 0) EXPECT_LE(d(l), peak * (1 + 1e-12)) << l;
    EXPECT_GE(d(l), 0.0);
  }
}

TEST_P(DistanceDensityTest, EveryPairGivesTheSameDensity) {
  const int m = Rule().num_candidates();
  const DistanceDensity reference = *DistanceDensity::Build(Rule(), 0, 1);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const DistanceDensity d = *DistanceDensity::Build(Rule(), i, j);
      for (size_t k = 0; k < d.values().size(); k += 7) {
        EXPECT_NEAR(d.values()[k], reference.values()[k],
                    1e-9 * (1 + reference.values()[k]))
            << i << "," << j << " at " << d.grid()[k];
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Rules, DistanceDensityTest,
    ::testing::Values(std::pair{"borda", 3}, std::pair{"plurality", 3},
                      std::pair{"custom:1,0.3,0", 3}, std::pair{"borda", 4},
                      std::pair{"plurality", 4}, std::pair{"borda", 5}));

TEST(DistanceDensityTest, LargeDimensionFallsBackToMonteCarlo) {
  DensityOptions options;
  options.monte_carlo_samples = 4000;
  options.grid_points = 64;
  const DistanceDensity d =
      *DistanceDensity::Build(PositionalRule::Borda(7), 0, 1, options);
  EXPECT_FALSE(d.exact());
  EXPECT_EQ(d.values().size(), 64u);
  EXPECT_NEAR(d.HalfMass(), 0.5, 0.05);
  bool any_error = false;
  for (double se : d.standard_errors()) any_error |= se > 0;
  EXPECT_TRUE(any_error);
}

}  // namespace
}  // namespace dprank
