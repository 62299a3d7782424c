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

#include "dprank/bounds.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "dprank/numeric.h"
#include "dprank/privacy.h"
#include "dprank/status.h"

namespace dprank {
namespace {

PrivacyParams Params(double eps, double delta, int64_t n) {
  return *PrivacyParams::Create(eps, delta, n);
}

BoundQuery Query(double eps, int64_t n, std::optional<double> tau = {},
                 double delta = 5e-4) {
  return BoundQuery{3, Params(eps, delta, n), tau, std::nullopt};
}

TEST(QFunctionTest, FrozenValues) {
  // 20-digit reference evaluations of the standard normal upper tail.
  const std::pair<double, double> cases[] = {
      {-8, 0.9999999999999993779},  {-3, 0.99865010196836990547},
      {-1, 0.84134474606854294859}, {0, 0.5},
      {0.5, 0.30853753872598689636}, {1, 0.15865525393145705141},
      {2, 0.0227501319481792072},   {5, 2.8665157187919391167e-7},
      {8, 6.2209605742717841235e-16}};
  for (auto [x, q] : cases) {
    EXPECT_NEAR(QFunction(x), q, 1e-12 * q) << x;
  }
}

TEST(QFunctionTest, SymmetryAndTailBound) {
  for (double x = -8; x <= 8; x += 0.125) {
    EXPECT_NEAR(QFunction(x) + QFunction(-x), 1.0, 1e-15) << x;
    if (x > 0) {
      EXPECT_LE(QFunction(x),
                std::exp(-x * x / 2) / (std::sqrt(2 * std::numbers::pi) * x));
    }
  }
}

TEST(QFunctionTest, LogTailFrozenValues) {
  // 40-digit reference values of ln Q(x).
  const std::pair<double, double> cases[] = {{30, -454.3212439563431971073558},
                                             {40, -804.6084420137537881666068},
                                             {50, -1254.831361139419901254133},
                                             {100, -5005.524208694205088626302},
                                             {1000, -500007.8266948121843098062}};
  for (auto [x, log_q] : cases) {
    EXPECT_NEAR(LogQFunction(x), log_q, 1e-13 * std::abs(log_q)) << x;
  }
  for (double x = -5; x < 37; x += 0.25) {
    EXPECT_NEAR(LogQFunction(x), std::log(QFunction(x)),
                1e-12 * (1 + std::abs(std::log(QFunction(x)))))
        << x;
  }
}

TEST(Theorem1Test, VanishingTauLimitIsOneHalf) {
  EXPECT_NEAR(Theorem1Expression(3, Params(0.1, 5e-4, 2000), kMinTau), 0.5,
              1e-6);
}

TEST(Theorem1Test, ClosedFormTauAndValue) {
  const PrivacyParams p = Params(0.1, 5e-4, 2000);
  const double tau = *OptimalTau(3, p);
  EXPECT_NEAR(tau, 0.02255857399859444116, 1e-13);
  EXPECT_NEAR(Theorem1Expression(3, p, tau), 0.37325384598509056230, 1e-13);
  const BoundResult r = *Theorem1Bound(Query(0.1, 2000));
  EXPECT_NEAR(r.value, 0.37325384598509056230, 1e-12);
  EXPECT_NEAR(r.tau, tau, 1e-6);
  EXPECT_EQ(r.method, BoundMethod::kTheorem1);
}

TEST(Theorem1Test, ClosedFormMatchesGridSearch) {
  const PrivacyParams p = Params(0.1, 5e-4, 2000);
  // 10^4 log-spaced points; neighbours differ by about 0.2%.
  double best_tau = 0, best = INFINITY;
  for (int k = 0; k < 10000; ++k) {
    const double tau = kSqrt2 * std::pow(1e-9, 1.0 - k / 9999.0);
    const double v = Theorem1Expression(3, p, tau);
    if (v < best) {
      best = v;
      best_tau = tau;
    }
  }
  EXPECT_NEAR(*OptimalTau(3, p) / best_tau, 1.0, 1e-3);
}

TEST(Theorem1Test, StationaryAtClosedForm) {
  for (auto [eps, n] : {std::pair{0.1, 2000L}, std::pair{0.5, 10000L},
                       std::pair{1.0, 100000L}}) {
    const PrivacyParams p = Params(eps, 1e-4, n);
    const double tau = *OptimalTau(3, p);
    const double h = 1e-6 * tau;
    const double derivative = (Theorem1Expression(3, p, tau + h) -
                               Theorem1Expression(3, p, tau - h)) /
                              (2 * h);
    EXPECT_NEAR(derivative, 0.0, 1e-6) << eps << " " << n;
  }
}

TEST(Theorem1Test, NoInteriorMinimumForSmallEpsN) {
  absl::StatusOr<double> tau = OptimalTau(3, Params(0.05, 5e-4, 2000));
  ASSERT_FALSE(tau.ok());
  EXPECT_EQ(ErrorKindOf(tau.status()), ErrorKind::kNoInteriorMinimum);
  // The bound still minimizes numerically; the infimum sits at tau -> 0.
  const BoundResult r = *Theorem1Bound(Query(0.05, 2000));
  EXPECT_NEAR(r.value, 0.5, 1e-6);
}

TEST(Theorem1Test, ClampsForReporting) {
  const BoundResult r = *Theorem1Bound(Query(0.1, 2000, 1.0));
  EXPECT_GT(r.raw, 1.0);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.tau, 1.0);
}

TEST(BoundQueryTest, RejectsBadTau) {
  for (double tau : {0.0, -0.1, 1.5}) {
    absl::StatusOr<BoundResult> r = Theorem1Bound(Query(0.1, 2000, tau));
    ASSERT_FALSE(r.ok()) << tau;
    EXPECT_EQ(ErrorKindOf(r.status()), ErrorKind::kDomain);
  }
}

TEST(Lemma3Test, DominatedByTheoremOneAtEveryTau) {
  for (double eps : {0.05, 0.1, 0.3}) {
    const PrivacyParams p = Params(eps, 5e-4, 2000);
    for (double tau = 1e-6; tau <= kSqrt2; tau *= 1.3) {
      EXPECT_LE(Lemma3Expression(3, p, tau), Theorem1Expression(3, p, tau))
          << eps << " " << tau;
    }
  }
  EXPECT_LE(Lemma3Bound(Query(0.1, 2000))->value,
            Theorem1Bound(Query(0.1, 2000))->value);
}

TEST(Lemma3Test, VanishesForLargeN) {
  EXPECT_LT(Lemma3Bound(Query(0.1, 1000000))->value, 1e-3);
}

TEST(Lemma3Test, LogValueStaysFiniteWhereTheValueUnderflows) {
  const PrivacyParams p = Params(0.1, 5e-4, 2000);
  for (double tau : {1e-4, 0.01, 0.1}) {
    EXPECT_NEAR(Lemma3LogExpression(3, p, tau),
                std::log(Lemma3Expression(3, p, tau)), 1e-10)
        << tau;
  }
  double previous = 0;
  for (int64_t n : {1000L, 10000L, 100000L, 1000000L}) {
    const BoundResult r = *Lemma3Bound(Query(0.1, n));
    EXPECT_TRUE(std::isfinite(r.log_raw));
    EXPECT_LT(r.log_raw, previous) << n;
    previous = r.log_raw;
  }
}

TEST(SimplifiedTest, PinnedValue) {
  const BoundResult r = *SimplifiedBound(Query(0.1, 2000));
  EXPECT_NEAR(r.value, 0.84220640184361969584, 1e-13);
  EXPECT_NEAR(r.tau,
              2 * std::sqrt(std::log(2000.0) * std::log(2 / 5e-4)) / 200.0,
              1e-15);
}

TEST(SimplifiedTest, DoublingNRoughlyHalves) {
  for (int64_t n = 10000; n <= 10000000; n *= 2) {
    const double ratio = SimplifiedBound(Query(0.1, n))->raw /
                         SimplifiedBound(Query(0.1, 2 * n))->raw;
    EXPECT_GT(ratio, 1.8) << n;
    EXPECT_LT(ratio, 2.1) << n;
  }
}

TEST(SimplifiedTest, DominatesTheoremOneAtItsTau) {
  for (double eps : {0.1, 0.5, 1.0}) {
    for (int64_t n : {2000L, 10000L, 1000000L}) {
      const BoundResult s = *SimplifiedBound(Query(eps, n));
      EXPECT_LE(Theorem1Expression(3, Params(eps, 5e-4, n), s.tau), s.raw)
          << eps << " " << n;
    }
  }
}

TEST(SimplifiedTest, NeedsTwoVoters) {
  absl::StatusOr<BoundResult> r = SimplifiedBound(Query(0.1, 1));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(ErrorKindOf(r.status()), ErrorKind::kDomain);
}

TEST(RuleSpecificTest, FrozenQuadratureValues) {
  // Adaptive quadrature of the same integrand against an independent
  // spline evaluation of the density.
  const RuleSpecificBounder b =
      *RuleSpecificBounder::Create(PositionalRule::Borda(3));
  const PrivacyParams p = Params(0.1, 5e-4, 2000);
  EXPECT_NEAR(b.Expression(p, 0.02), 0.2548195338642862, 1e-8);
  EXPECT_NEAR(b.Expression(p, 0.05), 0.12319038513451003, 1e-8);
  EXPECT_NEAR(b.Expression(p, 0.2), 0.11679714732775204, 1e-8);
  const BoundResult r = *b.Evaluate(p, std::nullopt);
  EXPECT_NEAR(r.value, 0.11679714732775201, 1e-7);
  EXPECT_EQ(r.method, BoundMethod::kRuleSpecific);
}

TEST(RuleSpecificTest, BelowTheoremOneAtEveryTau) {
  const RuleSpecificBounder b =
      *RuleSpecificBounder::Create(PositionalRule::Borda(3));
  for (double eps = 0.05; eps < 0.245; eps += 0.01) {
    const PrivacyParams p = Params(eps, 5e-4, 2000);
    for (double tau = 1e-5; tau <= kSqrt2; tau *= 1.5) {
      EXPECT_LE(b.Expression(p, tau), Theorem1Expression(3, p, tau) + 1e-12)
          << eps << " " << tau;
    }
  }
}

TEST(RuleSpecificTest, VanishesAsNoiseShrinks) {
  BoundQuery q = Query(0.1, 100000000);
  q.rule = PositionalRule::Borda(3);
  EXPECT_LT(RuleSpecificBound(q)->value, 1e-4);
}

TEST(RuleSpecificTest, Errors) {
  absl::StatusOr<RuleSpecificBounder> big =
      RuleSpecificBounder::Create(PositionalRule::Borda(7));
  ASSERT_FALSE(big.ok());
  EXPECT_EQ(ErrorKindOf(big.status()), ErrorKind::kUnsupported);
  absl::StatusOr<BoundResult> no_rule = RuleSpecificBound(Query(0.1, 2000));
  ASSERT_FALSE(no_rule.ok());
  EXPECT_EQ(ErrorKindOf(no_rule.status()), ErrorKind::kUnsupported);
  BoundQuery mismatched = Query(0.1, 2000);
  mismatched.rule = PositionalRule::Borda(4);
  EXPECT_EQ(ErrorKindOf(RuleSpecificBound(mismatched).status()),
            ErrorKind::kDimension);
}

TEST(BoundPropertyTest, NonIncreasingInEpsilonAndVoters) {
  const RuleSpecificBounder rule =
      *RuleSpecificBounder::Create(PositionalRule::Borda(3));
  const double epsilons[] = {0.05, 0.1, 0.2, 0.5, 1.0};
  const int64_t voters[] = {1000, 2000, 10000, 100000};
  auto all = [&](double eps, int64_t n) {
    const BoundQuery q = Query(eps, n);
    return std::vector<double>{Theorem1Bound(q)->value, Lemma3Bound(q)->value,
                               rule.Evaluate(q.params, std::nullopt)->value};
  };
  for (int64_t n : voters) {
    std::vector<double> prev = all(epsilons[0], n);
    for (size_t e = 1; e < std::size(epsilons); ++e) {
      std::vector<double> cur = all(epsilons[e], n);
      for (size_t k = 0; k < cur.size(); ++k) {
        EXPECT_LE(cur[k], prev[k] + 1e-9) << "method " << k << " n " << n;
      }
      prev = cur;
    }
  }
  for (double eps : epsilons) {
    std::vector<double> prev = all(eps, voters[0]);
    for (size_t i = 1; i < std::size(voters); ++i) {
      std::vector<double> cur = all(eps, voters[i]);
      for (size_t k = 0; k < cur.size(); ++k) {
        EXPECT_LE(cur[k], prev[k] + 1e-9) << "method " << k << " eps " << eps;
      }
      prev = cur;
    }
  }
}

TEST(BoundMethodTest, NamesRoundTrip) {
  for (BoundMethod m : {BoundMethod::kTheorem1, BoundMethod::kLemma3,
                        BoundMethod::kSimplified, BoundMethod::kRuleSpecific}) {
    EXPECT_EQ(*ParseBoundMethod(BoundMethodName(m)), m);
  }
  EXPECT_EQ(BoundMethodName(BoundMethod::kRuleSpecific), "ruleSpecific");
  EXPECT_FALSE(ParseBoundMethod("jensen").ok());
}

TEST(MinimizeOverTauTest, FindsInteriorMinimum) {
  const ScalarMinimum m = MinimizeOverTau(
      [](double t) { return (t - 0.3) * (t - 0.3); }, std::nullopt);
  EXPECT_NEAR(m.argmin, 0.3, 1e-7);
  const ScalarMinimum edge =
      MinimizeOverTau([](double t) { return -t; }, std::nullopt);
  EXPECT_NEAR(edge.argmin, kSqrt2, 1e-7);
}

}  // namespace
}  // namespace dprank
