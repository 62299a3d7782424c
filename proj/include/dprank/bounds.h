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

#ifndef DPRANK_BOUNDS_H_
#define DPRANK_BOUNDS_H_

#include <memory>
#include <optional>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "dprank/geometry.h"
#include "dprank/numeric.h"
#include "dprank/privacy.h"
#include "dprank/ranking.h"

namespace dprank {

// Lower end of the slab half-width search interval (tau must be > 0).
inline constexpr double kMinTau = 1e-9;
inline constexpr double kTauTolerance = 1e-8;

enum class BoundMethod { kTheorem1, kLemma3, kSimplified, kRuleSpecific };

absl::string_view BoundMethodName(BoundMethod method);
absl::StatusOr<BoundMethod> ParseBoundMethod(absl::string_view name);

struct BoundQuery {
  int num_candidates = 3;
  PrivacyParams params;
  std::optional<double> tau;            // slab half-width, 0 < tau <= sqrt2
  std::optional<PositionalRule> rule;   // rule-specific bound only
};

struct BoundResult {
  double value;  // min(raw, 1)
  double raw;
  double tau;
  BoundMethod method;
  // ln(raw); finite even where raw underflows to zero.
  double log_raw;
};

// Standard normal upper tail P(Z > x).
double QFunction(double x);
// ln Q(x), accurate where Q(x) itself underflows.
double LogQFunction(double x);

// Union-bound expression with the worst-case slice density (M!-1)/sqrt2:
//   C(M,2) (M!-1)/sqrt2 * tau + Q(eps N tau / sqrt(2 ln(2/delta))).
double Theorem1Expression(int num_candidates, const PrivacyParams& params,
                          double tau);

//   C(M,2) sqrt2 (M!-1) Q(eps N tau / (2 sqrt(2 ln(2/delta)))) tau
//     + Q(eps N tau / sqrt(2 ln(2/delta))).
// Note: this expression decreases monotonically to 0 as tau grows, so its
// minimum over (0, sqrt2] sits at sqrt2 and is essentially zero.
double Lemma3Expression(int num_candidates, const PrivacyParams& params,
                        double tau);
// Natural log of the above; finite where the value underflows.
double Lemma3LogExpression(int num_candidates, const PrivacyParams& params,
                           double tau);

// Stationary point of Theorem1Expression. Fails with kNoInteriorMinimum when
// eps N is too small for one to exist.
absl::StatusOr<double> OptimalTau(int num_candidates,
                                  const PrivacyParams& params);

absl::StatusOr<BoundResult> Theorem1Bound(const BoundQuery& query);
// Minimizes Lemma3LogExpression, so log_raw stays meaningful when the value
// underflows.
absl::StatusOr<BoundResult> Lemma3Bound(const BoundQuery& query);

// The general bound with the Gaussian tail replaced by its
// e^{-x^2/2}/(sqrt(2 pi) x) envelope at tau = 2 sqrt(ln N ln(2/delta)) / (eps N). Needs N >= 2.
absl::StatusOr<BoundResult> SimplifiedBound(const BoundQuery& query);

// Slab bound with the rule's exact distance density:
//   C(M,2) * 2 int_0^tau p_D(l) Q(l / sigmaHat) dl + Q(tau / sigmaHat).
// Builds the density on every call; use RuleSpecificBounder for sweeps.
absl::StatusOr<BoundResult> RuleSpecificBound(const BoundQuery& query);

// Holds the distance density of one rule so repeated evaluations (sweeps,
// tau searches) do not rebuild it.
class RuleSpecificBounder {
 public:
  static absl::StatusOr<RuleSpecificBounder> Create(const PositionalRule& rule);

  const PositionalRule& rule() const { return rule_; }
  const DistanceDensity& density() const { return *density_; }

  double Expression(const PrivacyParams& params, double tau) const;
  absl::StatusOr<BoundResult> Evaluate(const PrivacyParams& params,
                                       std::optional<double> tau) const;

 private:
  RuleSpecificBounder(PositionalRule rule,
                      std::shared_ptr<const DistanceDensity> density,
                      std::vector<double> table)
      : rule_(std::move(rule)),
        density_(std::move(density)),
        table_(std::move(table)) {}

  double Density(double l) const;

  PositionalRule rule_;
  std::shared_ptr<const DistanceDensity> density_;
  // Dense p_D table over [0, support] for large M! where exact evaluation
  // inside a tau search is too slow; empty when evaluating exactly.
  std::vector<double> table_;
};

// Minimizes f over (kMinTau, sqrt2]: a log-spaced scan picks the bracket,
// then golden-section refines it. `seed` (e.g. a closed-form optimum) is
// compared as an extra candidate.
ScalarMinimum MinimizeOverTau(const std::function<double(double)>& f,
                              std::optional<double> seed);

}  // namespace dprank

#endif  // DPRANK_BOUNDS_H_
