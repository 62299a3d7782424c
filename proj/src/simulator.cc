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

#include "dprank/simulator.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "dprank/numeric.h"
#include "dprank/status.h"

namespace dprank {
namespace {

constexpr int64_t kTrialChunk = 256;

TrialOutcome CompareRankings(const Ranking& truth, const Ranking& noisy) {
  return TrialOutcome{truth.order != noisy.order,
                      truth.order[0] != noisy.order[0],
                      truth.tied || noisy.tied};
}

absl::StatusOr<TrialOutcome> RunTrialWith(const ExperimentConfig& config,
                                          const ScoreMatrix& matrix,
                                          const PrivacyParams& params,
                                          int64_t trial_index) {
  const RngSeed trial_seed = DeriveSeed(config.seed, trial_index);
  Engine profile_rng = MakeEngine(DeriveSeed(trial_seed, 0));
  absl::StatusOr<VoteDistribution> v = VoteDistribution::Create(
      config.num_candidates(),
      SampleSimplexUniform(matrix.cols(), profile_rng));
  if (!v.ok()) return v.status();

  const RngSeed noise_seed = DeriveSeed(trial_seed, 1);
  std::vector<double> noisy;
  if (config.sigma_hat_override.has_value()) {
    const std::vector<double> z = StandardNormalVector(noise_seed, v->size());
    noisy.assign(v->weights().begin(), v->weights().end());
    for (size_t k = 0; k < noisy.size(); ++k) {
      noisy[k] += *config.sigma_hat_override * z[k];
    }
  } else {
    NoisySample<VoteDistribution> sample =
        AddNoiseNormalized(*v, params, noise_seed);
    noisy.assign(sample.value.weights().begin(), sample.value.weights().end());
  }

  absl::StatusOr<Ranking> truth = matrix.Aggregate(v->weights());
  if (!truth.ok()) return truth.status();
  absl::StatusOr<Ranking> released = matrix.Aggregate(noisy);
  if (!released.ok()) return released.status();
  return CompareRankings(*truth, *released);
}

}  // namespace

absl::string_view SweepAxisName(SweepAxis axis) {
  return axis == SweepAxis::kEpsilon ? "epsilon" : "voters";
}

absl::Status ExperimentConfig::Validate() const {
  if (num_candidates() < kMinCandidates ||
      num_candidates() > kMaxHistogramCandidates) {
    return MakeError(ErrorKind::kConfig,
                     absl::StrCat("candidates must be in [", kMinCandidates,
                                  ", ", kMaxHistogramCandidates, "]"));
  }
  if (trials < 1) {
    return MakeError(ErrorKind::kConfig, "trials must be >= 1");
  }
  for (size_t i = 0; i + 1 < sweep_values.size(); ++i) {
    if (!(sweep_values[i] < sweep_values[i + 1])) {
      return MakeError(ErrorKind::kConfig,
                       "sweep values must be strictly increasing");
    }
  }
  if (axis == SweepAxis::kVoters) {
    for (double n : sweep_values) {
      if (n < 1 || n != std::floor(n)) {
        return MakeError(ErrorKind::kConfig,
                         absl::StrCat("voter counts must be positive "
                                      "integers, got ",
                                      n));
      }
    }
  }
  if (sigma_hat_override.has_value() && !(*sigma_hat_override >= 0.0)) {
    return MakeError(ErrorKind::kConfig, "noise override must be >= 0");
  }
  absl::StatusOr<PrivacyParams> params = Params();
  if (!params.ok()) {
    return MakeError(ErrorKind::kConfig, params.status().message());
  }
  return absl::OkStatus();
}

absl::StatusOr<PrivacyParams> ExperimentConfig::Params() const {
  return PrivacyParams::Create(epsilon, delta.Resolve(voters), voters);
}

ExperimentConfig ExperimentConfig::AtAxisValue(double value) const {
  ExperimentConfig point = *this;
  point.sweep_values.clear();
  if (axis == SweepAxis::kEpsilon) {
    point.epsilon = value;
  } else {
    point.voters = static_cast<int64_t>(std::llround(value));
  }
  return point;
}

absl::StatusOr<TrialOutcome> RunTrial(const ExperimentConfig& config,
                                      int64_t trial_index) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<ScoreMatrix> matrix = ScoreMatrix::Build(config.rule);
  if (!matrix.ok()) return matrix.status();
  absl::StatusOr<PrivacyParams> params = config.Params();
  if (!params.ok()) return params.status();
  return RunTrialWith(config, *matrix, *params, trial_index);
}

ConfidenceInterval WilsonInterval(int64_t successes, int64_t trials,
                                  double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, std::min(center - half, p)),
          std::min(1.0, std::max(center + half, p))};
}

absl::StatusOr<ErrorRateEstimate> EstimateErrorRate(
    const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<ScoreMatrix> matrix = ScoreMatrix::Build(config.rule);
  if (!matrix.ok()) return matrix.status();
  absl::StatusOr<PrivacyParams> params = config.Params();
  if (!params.ok()) return params.status();

  const int64_t chunks = (config.trials + kTrialChunk - 1) / kTrialChunk;
  struct Counts {
    int64_t errors = 0;
    int64_t top_errors = 0;
    int64_t ties = 0;
    absl::Status status;
  };
  std::vector<Counts> per_chunk(chunks);
  ParallelFor(chunks, config.threads, [&](int64_t chunk) {
    Counts& counts = per_chunk[chunk];
    const int64_t begin = chunk * kTrialChunk;
    const int64_t end = std::min(config.trials, begin + kTrialChunk);
    for (int64_t t = begin; t < end; ++t) {
      absl::StatusOr<TrialOutcome> outcome =
          RunTrialWith(config, *matrix, *params, t);
      if (!outcome.ok()) {
        counts.status = outcome.status();
        return;
      }
      counts.errors += outcome->error;
      counts.top_errors += outcome->top_error;
      counts.ties += outcome->tied;
    }
  });

  ErrorRateEstimate estimate;
  estimate.trials = config.trials;
  for (const Counts& counts : per_chunk) {
    if (!counts.status.ok()) return counts.status;
    estimate.errors += counts.errors;
    estimate.top_errors += counts.top_errors;
    estimate.tie_count += counts.ties;
  }
  estimate.point_estimate = static_cast<double>(estimate.errors) /
                            static_cast<double>(estimate.trials);
  estimate.ci95 = WilsonInterval(estimate.errors, estimate.trials);
  return estimate;
}

absl::StatusOr<std::vector<SweepRow>> Sweep(const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  std::optional<RuleSpecificBounder> bounder;
  if (Factorial(config.num_candidates()) <= kMaxExactDimension) {
    absl::StatusOr<RuleSpecificBounder> created =
        RuleSpecificBounder::Create(config.rule);
    if (!created.ok()) return created.status();
    bounder.emplace(*std::move(created));
  }

  std::vector<double> values = config.sweep_values;
  if (values.empty()) {
    values.push_back(config.axis == SweepAxis::kEpsilon
                         ? config.epsilon
                         : static_cast<double>(config.voters));
  }

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double value : values) {
    const ExperimentConfig point = config.AtAxisValue(value);
    if (absl::Status s = point.Validate(); !s.ok()) return s;
    absl::StatusOr<PrivacyParams> params = point.Params();
    if (!params.ok()) return params.status();
    absl::StatusOr<ErrorRateEstimate> estimate = EstimateErrorRate(point);
    if (!estimate.ok()) return estimate.status();

    const BoundQuery query{point.num_candidates(), *params, std::nullopt,
                           point.rule};
    absl::StatusOr<BoundResult> theorem1 = Theorem1Bound(query);
    if (!theorem1.ok()) return theorem1.status();
    absl::StatusOr<BoundResult> lemma3 = Lemma3Bound(query);
    if (!lemma3.ok()) return lemma3.status();
    std::optional<BoundResult> rule_specific;
    if (bounder.has_value()) {
      absl::StatusOr<BoundResult> r = bounder->Evaluate(*params, std::nullopt);
      if (!r.ok()) return r.status();
      rule_specific = *r;
    }
    rows.push_back(SweepRow{config.axis, value, params->voters(),
                            params->epsilon(), params->delta(), *estimate,
                            *theorem1, *lemma3, rule_specific});
  }
  return rows;
}

}  // namespace dprank
