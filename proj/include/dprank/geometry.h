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

#ifndef DPRANK_GEOMETRY_H_
#define DPRANK_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dprank/random.h"
#include "dprank/ranking.h"

namespace dprank {

// Largest ambient dimension (M! = 720, M = 6) for which slice volumes and the
// distance density are computed exactly.
inline constexpr int64_t kMaxExactDimension = 720;

// Score-equality hyperplane S_i = S_j through the rank simplex, stored by its
// unit normal. The normal has zero coordinate sum, so distances measured along
// it stay inside the simplex's affine hull.
class Hyperplane {
 public:
  // Normal proportional to row_i - row_j of the rule's score matrix.
  static absl::StatusOr<Hyperplane> ForPair(const PositionalRule& rule, int i,
                                            int j);

  // Arbitrary direction in R^{M!}; rescaled to unit length. Rejects zero
  // vectors and directions with a nonzero coordinate sum.
  static absl::StatusOr<Hyperplane> FromNormal(std::vector<double> direction);

  std::span<const double> normal() const { return normal_; }
  // Unnormalized row_i - row_j (equal to the normal for FromNormal).
  std::span<const double> coefficients() const { return coefficients_; }
  int64_t dimension() const { return static_cast<int64_t>(normal_.size()); }
  std::pair<int, int> pair() const { return pair_; }

  // Range of the signed distance over the simplex: [min_j beta_j, max_j beta_j].
  std::pair<double, double> Support() const;

 private:
  Hyperplane(std::vector<double> normal, std::vector<double> coefficients,
             std::pair<int, int> pair)
      : normal_(std::move(normal)),
        coefficients_(std::move(coefficients)),
        pair_(pair) {}

  std::vector<double> normal_;
  std::vector<double> coefficients_;
  std::pair<int, int> pair_;
};

// normal . v; positive on the side where candidate i outscores candidate j.
absl::StatusOr<double> SignedDistance(std::span<const double> v,
                                      const Hyperplane& h);
absl::StatusOr<double> SignedDistance(const VoteDistribution& v,
                                      const Hyperplane& h);

// log of the (n-1)-volume of the unit simplex in R^n: sqrt(n) / (n-1)!.
double LogSimplexVolume(int64_t n);

// Exact density of normal . v for v uniform on the simplex, i.e. p_D at
// `offset`. This is the B-spline with knots at the normal's coordinates,
// evaluated by the Cox-de Boor recurrence (repeated knots are exact).
absl::StatusOr<double> SliceDensity(const Hyperplane& h, double offset);

// (n-2)-volume of {v in simplex : normal . v = offset}. Zero outside
// [-sqrt2, sqrt2]. Underflows to 0 for large n; see LogCrossSectionVolume.
absl::StatusOr<double> CrossSectionVolume(const Hyperplane& h, double offset);
absl::StatusOr<double> LogCrossSectionVolume(const Hyperplane& h,
                                             double offset);

struct SlabEstimate {
  double offset;
  double density;
  double standard_error;
  int64_t hits;
  int64_t samples;
};

// Monte Carlo estimate of p_D at each offset: the fraction of uniform simplex
// samples whose signed distance falls within slab_width/2 of the offset,
// divided by slab_width. Independent of the exact path; deterministic in
// (seed, samples) for any thread count.
std::vector<SlabEstimate> EstimateSliceDensityMonteCarlo(
    const Hyperplane& h, std::span<const double> offsets, double slab_width,
    int64_t samples, RngSeed seed, int threads);

struct DensityOptions {
  int grid_points = 512;
  // Used only when M! exceeds kMaxExactDimension.
  int64_t monte_carlo_samples = 20000;
  RngSeed seed{0x5eed};
  int threads = 1;
};

// p_D for one candidate pair of a rule, tabulated on a uniform grid over
// [0, sqrt2] (symmetric, so only the half-line is stored). Exact for
// M <= 6; a folded Monte Carlo histogram with standard errors beyond that.
class DistanceDensity {
 public:
  static absl::StatusOr<DistanceDensity> Build(const PositionalRule& rule,
                                               int i = 0, int j = 1,
                                               const DensityOptions& options =
                                                   {});

  bool exact() const { return exact_; }
  const Hyperplane& hyperplane() const { return hyperplane_; }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  // All zero on the exact path.
  std::span<const double> standard_errors() const { return standard_errors_; }

  // p_D(l). Exact evaluation when available, otherwise linear interpolation
  // of the Monte Carlo grid (zero past its end). Symmetric in l.
  double operator()(double l) const;

  // Simpson integral of the tabulated values; 1/2 in exact arithmetic. The
  // exact grid spans [0, sqrt2]; the sampled one stops at 12 standard
  // deviations of D.
  double HalfMass() const;

 private:
  DistanceDensity(Hyperplane hyperplane, bool exact, std::vector<double> knots,
                  std::vector<double> grid, std::vector<double> values,
                  std::vector<double> errors)
      : hyperplane_(std::move(hyperplane)),
        exact_(exact),
        knots_(std::move(knots)),
        grid_(std::move(grid)),
        values_(std::move(values)),
        standard_errors_(std::move(errors)) {}

  Hyperplane hyperplane_;
  bool exact_;
  std::vector<double> knots_;  // sorted normal coordinates, exact path only
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> standard_errors_;
};

}  // namespace dprank

#endif  // DPRANK_GEOMETRY_H_
