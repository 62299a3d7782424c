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

#ifndef DPRANK_RANKING_H_
#define DPRANK_RANKING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"

namespace dprank {

// Histograms over all M! rankings are materialized only for M in this range.
// Bound computations that never build a histogram accept any M >= 3.
inline constexpr int kMinCandidates = 3;
inline constexpr int kMaxHistogramCandidates = 8;

// m! as an integer; valid for 0 <= m <= 20.
int64_t Factorial(int m);

// A strict linear order of candidates 0..M-1, best first.
class Permutation {
 public:
  static absl::StatusOr<Permutation> Create(std::vector<int> order);
  static Permutation Identity(int num_candidates);

  int size() const { return static_cast<int>(order_.size()); }
  std::span<const int> order() const { return order_; }
  int operator[](int position) const { return order_[position]; }

  // Zero-based position held by `candidate`.
  int PositionOf(int candidate) const;

  // The same ballot read worst-to-best.
  Permutation Reversed() const;

  // "a>b>c" style rendering with numeric ids, e.g. "0>2>1".
  std::string ToString() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int> order) : order_(std::move(order)) {}

  std::vector<int> order_;
};

// Lexicographic (Lehmer code) rank of `p` among all permutations of its size.
int64_t PermutationIndex(const Permutation& p);

// Inverse of PermutationIndex.
absl::StatusOr<Permutation> PermutationAt(int num_candidates, int64_t index);

// Position of a three-candidate ballot in the cyclic listing
// abc, acb, cab, cba, bca, bac. Only meaningful for M = 3; used to cross-check
// the textbook Borda score matrix and hyperplane equations.
absl::StatusOr<int> PaperOrderIndex(const Permutation& p);

// Positional scoring rule in normalized form: s_1 = 1 >= ... >= s_M = 0.
class PositionalRule {
 public:
  enum class Kind { kBorda, kPlurality, kCustom };

  static PositionalRule Borda(int num_candidates);
  static PositionalRule Plurality(int num_candidates);
  static absl::StatusOr<PositionalRule> Custom(std::vector<double> scores);

  // Accepts "borda", "plurality" or "custom:s1,...,sM".
  static absl::StatusOr<PositionalRule> Parse(absl::string_view spec,
                                              int num_candidates);

  int num_candidates() const { return static_cast<int>(scores_.size()); }
  std::span<const double> scores() const { return scores_; }
  Kind kind() const { return kind_; }
  absl::string_view name() const;

  // Inverse of Parse.
  std::string ToString() const;

 private:
  PositionalRule(Kind kind, std::vector<double> scores)
      : kind_(kind), scores_(std::move(scores)) {}

  Kind kind_;
  std::vector<double> scores_;
};

// Vote counts indexed by PermutationIndex. Entries may be negative or
// fractional once noise has been added.
class Histogram {
 public:
  static absl::StatusOr<Histogram> Create(int num_candidates,
                                          std::vector<double> counts);
  static absl::StatusOr<Histogram> Zeros(int num_candidates);
  static absl::StatusOr<Histogram> FromBallots(
      int num_candidates, std::span<const Permutation> ballots);

  int num_candidates() const { return num_candidates_; }
  std::span<const double> counts() const { return counts_; }
  double operator[](int64_t index) const { return counts_[index]; }
  int64_t size() const { return static_cast<int64_t>(counts_.size()); }

  absl::Status Add(const Permutation& ballot, double weight = 1.0);
  double Total() const;

 private:
  Histogram(int num_candidates, std::vector<double> counts)
      : num_candidates_(num_candidates), counts_(std::move(counts)) {}

  int num_candidates_;
  std::vector<double> counts_;
};

// A histogram scaled to unit mass; a point of the rank simplex before noise.
class VoteDistribution {
 public:
  static absl::StatusOr<VoteDistribution> Create(int num_candidates,
                                                 std::vector<double> weights);

  int num_candidates() const { return num_candidates_; }
  std::span<const double> weights() const { return weights_; }
  double operator[](int64_t index) const { return weights_[index]; }
  int64_t size() const { return static_cast<int64_t>(weights_.size()); }

 private:
  VoteDistribution(int num_candidates, std::vector<double> weights)
      : num_candidates_(num_candidates), weights_(std::move(weights)) {}

  int num_candidates_;
  std::vector<double> weights_;
};

absl::StatusOr<VoteDistribution> Normalize(const Histogram& h);

struct Ranking {
  Permutation order;
  std::vector<double> scores;  // indexed by candidate id
  bool tied = false;           // two totals compared exactly equal
};

// Sorts candidates by non-increasing total; equal totals keep ascending id.
Ranking RankByScores(std::vector<double> totals);

// M x M! matrix whose entry (c, k) is the score candidate c receives from the
// k-th ranking (lexicographic order).
class ScoreMatrix {
 public:
  static absl::StatusOr<ScoreMatrix> Build(const PositionalRule& rule);

  int rows() const { return rows_; }
  int64_t cols() const { return cols_; }
  double at(int candidate, int64_t column) const {
    return entries_[candidate * cols_ + column];
  }
  std::span<const double> row(int candidate) const {
    return std::span<const double>(entries_).subspan(candidate * cols_, cols_);
  }

  // Candidate totals for a vector indexed by ranking.
  absl::StatusOr<std::vector<double>> Totals(std::span<const double> x) const;

  absl::StatusOr<Ranking> Aggregate(std::span<const double> x) const;

 private:
  ScoreMatrix(int rows, int64_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {}

  int rows_;
  int64_t cols_;
  std::vector<double> entries_;
};

absl::StatusOr<Ranking> Aggregate(const PositionalRule& rule,
                                  const Histogram& h);
absl::StatusOr<Ranking> Aggregate(const PositionalRule& rule,
                                  const VoteDistribution& v);

// Direct O(MN + M log M) aggregation over a ballot list, no histogram.
absl::StatusOr<Ranking> AggregateBallots(const PositionalRule& rule,
                                         std::span<const Permutation> ballots);

}  // namespace dprank

#endif  // DPRANK_RANKING_H_
