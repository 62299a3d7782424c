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

#ifndef DPRANK_SIMULATOR_H_
#define DPRANK_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "dprank/bounds.h"
#include "dprank/privacy.h"
#include "dprank/random.h"
#include "dprank/ranking.h"

namespace dprank {

// delta either fixed or tied to the electorate size as c / N.
struct DeltaSpec {
  enum class Kind { kFixed, kPerVoter };
  Kind kind = Kind::kFixed;
  double value = 5e-4;

  static DeltaSpec Fixed(double delta) { return {Kind::kFixed, delta}; }
  static DeltaSpec PerVoter(double scale) { return {Kind::kPerVoter, scale}; }
  double Resolve(int64_t voters) const {
    return kind == Kind::kFixed ? value : value / static_cast<double>(voters);
  }
};

enum class SweepAxis { kEpsilon, kVoters };

absl::string_view SweepAxisName(SweepAxis axis);

struct ExperimentConfig {
  PositionalRule rule = PositionalRule::Borda(3);
  double epsilon = 0.1;
  DeltaSpec delta;
  int64_t voters = 2000;
  int64_t trials = 10000;
  RngSeed seed{1};
  SweepAxis axis = SweepAxis::kEpsilon;
  // Strictly increasing. Empty means a single point at (epsilon, voters).
  std::vector<double> sweep_values;
  int threads = 1;
  // Replaces sigmaHat when set; a zero-noise run must reproduce the input.
  std::optional<double> sigma_hat_override;

  int num_candidates() const { return rule.num_candidates(); }
  absl::Status Validate() const;
  absl::StatusOr<PrivacyParams> Params() const;
  // Copy with the axis coordinate set to `value` and the sweep cleared.
  ExperimentConfig AtAxisValue(double value) const;
};

struct TrialOutcome {
  bool error = false;      // full aggregated order changed
  bool top_error = false;  // winner changed
  bool tied = false;       // exact tie on either side
};

// One uniform profile v, its noised copy v + N(0, sigmaHat^2 I), and the
// comparison of the two aggregated rankings. Deterministic in
// (config.seed, trial_index).
absl::StatusOr<TrialOutcome> RunTrial(const ExperimentConfig& config,
                                      int64_t trial_index);

struct ConfidenceInterval {
  double lo;
  double hi;
};

// Wilson score interval for `successes` out of `trials` at normal quantile z.
ConfidenceInterval WilsonInterval(int64_t successes, int64_t trials,
                                  double z = 1.959963984540054);

struct ErrorRateEstimate {
  double point_estimate = 0.0;
  int64_t trials = 0;
  int64_t errors = 0;
  ConfidenceInterval ci95{0.0, 0.0};
  int64_t tie_count = 0;
  int64_t top_errors = 0;

  double half_width() const { return 0.5 * (ci95.hi - ci95.lo); }
};

absl::StatusOr<ErrorRateEstimate> EstimateErrorRate(
    const ExperimentConfig& config);

struct SweepRow {
  SweepAxis axis;
  double value;
  int64_t voters;
  double epsilon;
  double delta;
  ErrorRateEstimate estimate;
  BoundResult theorem1;
  BoundResult lemma3;
  std::optional<BoundResult> rule_specific;  // absent for M > 6
};

// Every sweep point reuses config.seed (common random numbers), so adjacent
// points differ only through the changed parameter.
absl::StatusOr<std::vector<SweepRow>> Sweep(const ExperimentConfig& config);

}  // namespace dprank

#endif  // DPRANK_SIMULATOR_H_
