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

#include "dprank/ranking.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dprank/status.h"

namespace dprank {
namespace {

absl::Status CheckHistogramCandidates(int num_candidates) {
  if (num_candidates < kMinCandidates ||
      num_candidates > kMaxHistogramCandidates) {
    return MakeError(ErrorKind::kUnsupported,
                     absl::StrFormat("histograms need %d <= M <= %d, got %d",
                                     kMinCandidates, kMaxHistogramCandidates,
                                     num_candidates));
  }
  return absl::OkStatus();
}

absl::Status CheckLength(int num_candidates, size_t length) {
  const int64_t expected = Factorial(num_candidates);
  if (static_cast<int64_t>(length) != expected) {
    return MakeError(ErrorKind::kDimension,
                     absl::StrFormat("expected %d entries for M=%d, got %d",
                                     expected, num_candidates, length));
  }
  return absl::OkStatus();
}

// Borda for M=3 listed under the cyclic order abc, acb, cab, cba, bca, bac.
constexpr std::array<std::array<int, 3>, 6> kCyclicOrderM3 = {{
    {0, 1, 2},
    {0, 2, 1},
    {2, 0, 1},
    {2, 1, 0},
    {1, 2, 0},
    {1, 0, 2},
}};

}  // namespace

int64_t Factorial(int m) {
  int64_t result = 1;
  for (int i = 2; i <= m; ++i) result *= i;
  return result;
}

absl::StatusOr<Permutation> Permutation::Create(std::vector<int> order) {
  const int m = static_cast<int>(order.size());
  std::vector<bool> seen(m, false);
  for (int c : order) {
    if (c < 0 || c >= m) {
      return MakeError(ErrorKind::kInvalidPermutation,
                       absl::StrCat("candidate id ", c, " out of range for M=",
                                    m));
    }
    if (seen[c]) {
      return MakeError(ErrorKind::kInvalidPermutation,
                       absl::StrCat("candidate id ", c, " appears twice"));
    }
    seen[c] = true;
  }
  return Permutation(std::move(order));
}

Permutation Permutation::Identity(int num_candidates) {
  std::vector<int> order(num_candidates);
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

int Permutation::PositionOf(int candidate) const {
  return static_cast<int>(std::find(order_.begin(), order_.end(), candidate) -
                          order_.begin());
}

Permutation Permutation::Reversed() const {
  return Permutation(std::vector<int>(order_.rbegin(), order_.rend()));
}

std::string Permutation::ToString() const { return absl::StrJoin(order_, ">"); }

int64_t PermutationIndex(const Permutation& p) {
  const int m = p.size();
  int64_t index = 0;
  for (int i = 0; i < m; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (p[j] < p[i]) ++smaller_after;
    }
    index += smaller_after * Factorial(m - 1 - i);
  }
  return index;
}

absl::StatusOr<Permutation> PermutationAt(int num_candidates, int64_t index) {
  if (num_candidates < 1 || num_candidates > 20) {
    return MakeError(ErrorKind::kUnsupported, "M must be in [1, 20]");
  }
  if (index < 0 || index >= Factorial(num_candidates)) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("index ", index, " outside [0, ",
                                  num_candidates, "!)"));
  }
  std::vector<int> remaining(num_candidates);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> order;
  order.reserve(num_candidates);
  for (int i = num_candidates - 1; i >= 0; --i) {
    const int64_t block = Factorial(i);
    const int64_t digit = index / block;
    index %= block;
    order.push_back(remaining[digit]);
    remaining.erase(remaining.begin() + digit);
  }
  return Permutation::Create(std::move(order));
}

absl::StatusOr<int> PaperOrderIndex(const Permutation& p) {
  if (p.size() != 3) {
    return MakeError(ErrorKind::kUnsupported,
                     "the cyclic listing is defined for M=3 only");
  }
  for (int k = 0; k < static_cast<int>(kCyclicOrderM3.size()); ++k) {
    if (std::equal(p.order().begin(), p.order().end(),
                   kCyclicOrderM3[k].begin())) {
      return k;
    }
  }
  return MakeError(ErrorKind::kInvalidPermutation, "not a permutation of 3");
}

PositionalRule PositionalRule::Borda(int num_candidates) {
  std::vector<double> scores(num_candidates);
  for (int i = 0; i < num_candidates; ++i) {
    scores[i] = static_cast<double>(num_candidates - 1 - i) /
                static_cast<double>(num_candidates - 1);
  }
  return PositionalRule(Kind::kBorda, std::move(scores));
}

PositionalRule PositionalRule::Plurality(int num_candidates) {
  std::vector<double> scores(num_candidates, 0.0);
  scores[0] = 1.0;
  return PositionalRule(Kind::kPlurality, std::move(scores));
}

absl::StatusOr<PositionalRule> PositionalRule::Custom(
    std::vector<double> scores) {
  if (static_cast<int>(scores.size()) < kMinCandidates) {
    return MakeError(ErrorKind::kDimension,
                     absl::StrCat("need at least ", kMinCandidates,
                                  " scores, got ", scores.size()));
  }
  if (scores.front() != 1.0 || scores.back() != 0.0) {
    return MakeError(ErrorKind::kParse,
                     "scores must be normalized with s_1 = 1 and s_M = 0");
  }
  for (size_t i = 0; i + 1 < scores.size(); ++i) {
    if (!(scores[i] >= scores[i + 1])) {
      return MakeError(ErrorKind::kParse, "scores must be non-increasing");
    }
  }
  return PositionalRule(Kind::kCustom, std::move(scores));
}

absl::StatusOr<PositionalRule> PositionalRule::Parse(absl::string_view spec,
                                                     int num_candidates) {
  if (spec == "borda") return Borda(num_candidates);
  if (spec == "plurality") return Plurality(num_candidates);
  if (absl::ConsumePrefix(&spec, "custom:")) {
    std::vector<double> scores;
    for (absl::string_view field : absl::StrSplit(spec, ',')) {
      double value;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &value)) {
        return MakeError(ErrorKind::kParse,
                         absl::StrCat("bad score '", field, "'"));
      }
      scores.push_back(value);
    }
    if (static_cast<int>(scores.size()) != num_candidates) {
      return MakeError(ErrorKind::kDimension,
                       absl::StrCat("custom rule has ", scores.size(),
                                    " scores but M=", num_candidates));
    }
    return Custom(std::move(scores));
  }
  return MakeError(ErrorKind::kParse, absl::StrCat("unknown rule '", spec,
                                                   "'"));
}

absl::string_view PositionalRule::name() const {
  switch (kind_) {
    case Kind::kBorda:
      return "borda";
    case Kind::kPlurality:
      return "plurality";
    case Kind::kCustom:
      return "custom";
  }
  return "custom";
}

std::string PositionalRule::ToString() const {
  if (kind_ != Kind::kCustom) return std::string(name());
  return absl::StrCat(
      "custom:", absl::StrJoin(scores_, ",", [](std::string* out, double s) {
        absl::StrAppend(out, absl::StrFormat("%.17g", s));
      }));
}

absl::StatusOr<Histogram> Histogram::Create(int num_candidates,
                                            std::vector<double> counts) {
  if (absl::Status s = CheckHistogramCandidates(num_candidates); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckLength(num_candidates, counts.size()); !s.ok()) {
    return s;
  }
  return Histogram(num_candidates, std::move(counts));
}

absl::StatusOr<Histogram> Histogram::Zeros(int num_candidates) {
  if (absl::Status s = CheckHistogramCandidates(num_candidates); !s.ok()) {
    return s;
  }
  return Histogram(num_candidates,
                   std::vector<double>(Factorial(num_candidates), 0.0));
}

absl::StatusOr<Histogram> Histogram::FromBallots(
    int num_candidates, std::span<const Permutation> ballots) {
  absl::StatusOr<Histogram> h = Zeros(num_candidates);
  if (!h.ok()) return h.status();
  for (const Permutation& ballot : ballots) {
    if (absl::Status s = h->Add(ballot); !s.ok()) return s;
  }
  return h;
}

absl::Status Histogram::Add(const Permutation& ballot, double weight) {
  if (ballot.size() != num_candidates_) {
    return MakeError(ErrorKind::kDimension,
                     absl::StrCat("ballot ranks ", ballot.size(),
                                  " candidates, histogram has ",
                                  num_candidates_));
  }
  counts_[PermutationIndex(ballot)] += weight;
  return absl::OkStatus();
}

double Histogram::Total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

absl::StatusOr<VoteDistribution> VoteDistribution::Create(
    int num_candidates, std::vector<double> weights) {
  if (absl::Status s = CheckHistogramCandidates(num_candidates); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckLength(num_candidates, weights.size()); !s.ok()) {
    return s;
  }
  return VoteDistribution(num_candidates, std::move(weights));
}

absl::StatusOr<VoteDistribution> Normalize(const Histogram& h) {
  const double total = h.Total();
  if (!(total > 0.0)) {
    return MakeError(ErrorKind::kDegenerateInput,
                     "cannot normalize a histogram with non-positive mass");
  }
  std::vector<double> weights(h.counts().begin(), h.counts().end());
  for (double& w : weights) w /= total;
  return VoteDistribution::Create(h.num_candidates(), std::move(weights));
}

Ranking RankByScores(std::vector<double> totals) {
  const int m = static_cast<int>(totals.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return totals[a] > totals[b]; });
  bool tied = false;
  for (int i = 0; i + 1 < m; ++i) {
    if (totals[order[i]] == totals[order[i + 1]]) tied = true;
  }
  // order is a permutation of 0..m-1 by construction.
  return Ranking{*Permutation::Create(std::move(order)), std::move(totals),
                 tied};
}

absl::StatusOr<ScoreMatrix> ScoreMatrix::Build(const PositionalRule& rule) {
  const int m = rule.num_candidates();
  if (absl::Status s = CheckHistogramCandidates(m); !s.ok()) return s;
  const int64_t cols = Factorial(m);
  std::vector<double> entries(m * cols);
  // Walk permutations in lexicographic order; next_permutation matches the
  // Lehmer ranking used by PermutationIndex.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  int64_t k = 0;
  do {
    for (int pos = 0; pos < m; ++pos) {
      entries[order[pos] * cols + k] = rule.scores()[pos];
    }
    ++k;
  } while (std::next_permutation(order.begin(), order.end()));
  return ScoreMatrix(m, cols, std::move(entries));
}

absl::StatusOr<std::vector<double>> ScoreMatrix::Totals(
    std::span<const double> x) const {
  if (static_cast<int64_t>(x.size()) != cols_) {
    return MakeError(ErrorKind::kDimension,
                     absl::StrFormat("expected %d entries, got %d", cols_,
                                     x.size()));
  }
  std::vector<double> totals(rows_, 0.0);
  for (int c = 0; c < rows_; ++c) {
    const double* r = &entries_[c * cols_];
    double sum = 0.0;
    for (int64_t k = 0; k < cols_; ++k) sum += r[k] * x[k];
    totals[c] = sum;
  }
  return totals;
}

absl::StatusOr<Ranking> ScoreMatrix::Aggregate(
    std::span<const double> x) const {
  absl::StatusOr<std::vector<double>> totals = Totals(x);
  if (!totals.ok()) return totals.status();
  return RankByScores(*std::move(totals));
}

absl::StatusOr<Ranking> Aggregate(const PositionalRule& rule,
                                  const Histogram& h) {
  if (rule.num_candidates() != h.num_candidates()) {
    return MakeError(ErrorKind::kDimension, "rule and histogram disagree on M");
  }
  absl::StatusOr<ScoreMatrix> matrix = ScoreMatrix::Build(rule);
  if (!matrix.ok()) return matrix.status();
  return matrix->Aggregate(h.counts());
}

absl::StatusOr<Ranking> Aggregate(const PositionalRule& rule,
                                  const VoteDistribution& v) {
  if (rule.num_candidates() != v.num_candidates()) {
    return MakeError(ErrorKind::kDimension,
                     "rule and distribution disagree on M");
  }
  absl::StatusOr<ScoreMatrix> matrix = ScoreMatrix::Build(rule);
  if (!matrix.ok()) return matrix.status();
  return matrix->Aggregate(v.weights());
}

absl::StatusOr<Ranking> AggregateBallots(const PositionalRule& rule,
                                         std::span<const Permutation> ballots) {
  const int m = rule.num_candidates();
  std::vector<double> totals(m, 0.0);
  for (const Permutation& ballot : ballots) {
    if (ballot.size() != m) {
      return MakeError(ErrorKind::kDimension,
                       absl::StrCat("ballot ranks ", ballot.size(),
                                    " candidates, rule expects ", m));
    }
    for (int pos = 0; pos < m; ++pos) totals[ballot[pos]] += rule.scores()[pos];
  }
  return RankByScores(std::move(totals));
}

}  // namespace dprank
