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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dprank/numeric.h"
#include "dprank/status.h"

namespace dprank {
namespace {

constexpr int64_t kMonteCarloChunk = 1 << 15;
constexpr double kMonteCarloRangeSds = 12.0;

// Density of knots . v for v uniform on the simplex, where `knots` holds the
// n coefficients in ascending order. This is the Curry-Schoenberg B-spline
// M(x) = (n-1) [t_0..t_{n-1}] (. - x)_+^{n-2}. Cox-de Boor computes the
// normalized spline N_{0,n-1}; its integral is (t_{n-1} - t_0) / (n-1).
double BSplineDensity(std::span<const double> knots, double x) {
  const size_t n = knots.size();
  const double width = knots[n - 1] - knots[0];
  if (!(width > 0.0) || x < knots[0] || x >= knots[n - 1]) return 0.0;
  std::vector<double> basis(n - 1, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    basis[i] = (knots[i] <= x && x < knots[i + 1]) ? 1.0 : 0.0;
  }
  for (size_t order = 2; order < n; ++order) {
    for (size_t i = 0; i + order < n; ++i) {
      double value = 0.0;
      const double left_span = knots[i + order - 1] - knots[i];
      if (left_span > 0.0 && basis[i] != 0.0) {
        value += (x - knots[i]) / left_span * basis[i];
      }
      const double right_span = knots[i + order] - knots[i + 1];
      if (right_span > 0.0 && basis[i + 1] != 0.0) {
        value += (knots[i + order] - x) / right_span * basis[i + 1];
      }
      basis[i] = value;
    }
  }
  return static_cast<double>(n - 1) / width * basis[0];
}

std::vector<double> SortedKnots(const Hyperplane& h) {
  std::vector<double> knots(h.normal().begin(), h.normal().end());
  std::sort(knots.begin(), knots.end());
  return knots;
}

absl::Status CheckExact(const Hyperplane& h) {
  if (h.dimension() > kMaxExactDimension) {
    return MakeError(ErrorKind::kUnsupported,
                     absl::StrCat("exact slicing supports M! <= ",
                                  kMaxExactDimension, ", got ", h.dimension()));
  }
  return absl::OkStatus();
}

bool IsFactorial(int64_t n) {
  for (int m = kMinCandidates; m <= kMaxHistogramCandidates; ++m) {
    if (Factorial(m) == n) return true;
  }
  return false;
}

}  // namespace

absl::StatusOr<Hyperplane> Hyperplane::ForPair(const PositionalRule& rule,
                                               int i, int j) {
  const int m = rule.num_candidates();
  if (i == j || i < 0 || j < 0 || i >= m || j >= m) {
    return MakeError(ErrorKind::kInvalidPair,
                     absl::StrCat("invalid candidate pair (", i, ", ", j,
                                  ") for M=", m));
  }
  absl::StatusOr<ScoreMatrix> matrix = ScoreMatrix::Build(rule);
  if (!matrix.ok()) return matrix.status();
  std::vector<double> coefficients(matrix->cols());
  double norm_sq = 0.0;
  for (int64_t k = 0; k < matrix->cols(); ++k) {
    coefficients[k] = matrix->at(i, k) - matrix->at(j, k);
    norm_sq += coefficients[k] * coefficients[k];
  }
  // Any normalized rule has s_1 != s_M, so some ranking separates i from j.
  const double norm = std::sqrt(norm_sq);
  std::vector<double> normal = coefficients;
  for (double& c : normal) c /= norm;
  return Hyperplane(std::move(normal), std::move(coefficients), {i, j});
}

absl::StatusOr<Hyperplane> Hyperplane::FromNormal(
    std::vector<double> direction) {
  if (!IsFactorial(static_cast<int64_t>(direction.size()))) {
    return MakeError(ErrorKind::kDimension,
                     absl::StrCat("normal length ", direction.size(),
                                  " is not M! for a supported M"));
  }
  double norm_sq = 0.0;
  double sum = 0.0;
  double max_abs = 0.0;
  for (double c : direction) {
    norm_sq += c * c;
    sum += c;
    max_abs = std::max(max_abs, std::abs(c));
  }
  if (!(norm_sq > 0.0)) {
    return MakeError(ErrorKind::kDegenerateInput, "zero normal vector");
  }
  if (std::abs(sum) > 1e-9 * max_abs * direction.size()) {
    return MakeError(ErrorKind::kDomain,
                     "normal must have zero coordinate sum to pass through "
                     "the simplex centroid");
  }
  const double norm = std::sqrt(norm_sq);
  std::vector<double> normal = direction;
  for (double& c : normal) c /= norm;
  return Hyperplane(std::move(normal), std::move(direction), {-1, -1});
}

std::pair<double, double> Hyperplane::Support() const {
  const auto [lo, hi] = std::minmax_element(normal_.begin(), normal_.end());
  return {*lo, *hi};
}

absl::StatusOr<double> SignedDistance(std::span<const double> v,
                                      const Hyperplane& h) {
  if (static_cast<int64_t>(v.size()) != h.dimension()) {
    return MakeError(ErrorKind::kDimension,
                     absl::StrFormat("point has %d coordinates, hyperplane %d",
                                     v.size(), h.dimension()));
  }
  return std::inner_product(v.begin(), v.end(), h.normal().begin(), 0.0);
}

absl::StatusOr<double> SignedDistance(const VoteDistribution& v,
                                      const Hyperplane& h) {
  return SignedDistance(v.weights(), h);
}

double LogSimplexVolume(int64_t n) {
  return 0.5 * std::log(static_cast<double>(n)) -
         std::lgamma(static_cast<double>(n));
}

absl::StatusOr<double> SliceDensity(const Hyperplane& h, double offset) {
  if (absl::Status s = CheckExact(h); !s.ok()) return s;
  if (std::abs(offset) >= kSqrt2) return 0.0;
  return BSplineDensity(SortedKnots(h), offset);
}

absl::StatusOr<double> LogCrossSectionVolume(const Hyperplane& h,
                                             double offset) {
  absl::StatusOr<double> density = SliceDensity(h, offset);
  if (!density.ok()) return density.status();
  if (*density <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(*density) + LogSimplexVolume(h.dimension());
}

absl::StatusOr<double> CrossSectionVolume(const Hyperplane& h, double offset) {
  absl::StatusOr<double> log_volume = LogCrossSectionVolume(h, offset);
  if (!log_volume.ok()) return log_volume.status();
  return std::exp(*log_volume);
}

std::vector<SlabEstimate> EstimateSliceDensityMonteCarlo(
    const Hyperplane& h, std::span<const double> offsets, double slab_width,
    int64_t samples, RngSeed seed, int threads) {
  const int64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  const size_t k = offsets.size();
  std::vector<int64_t> hits(chunks * k, 0);
  const double half = 0.5 * slab_width;
  ParallelFor(chunks, threads, [&](int64_t chunk) {
    Engine rng = MakeEngine(DeriveSeed(seed, chunk));
    const int64_t begin = chunk * kMonteCarloChunk;
    const int64_t end = std::min(samples, begin + kMonteCarloChunk);
    int64_t* local = &hits[chunk * k];
    for (int64_t s = begin; s < end; ++s) {
      const std::vector<double> v = SampleSimplexUniform(h.dimension(), rng);
      const double d =
          std::inner_product(v.begin(), v.end(), h.normal().begin(), 0.0);
      for (size_t o = 0; o < k; ++o) {
        if (std::abs(d - offsets[o]) < half) ++local[o];
      }
    }
  });
  std::vector<SlabEstimate> result;
  result.reserve(k);
  for (size_t o = 0; o < k; ++o) {
    int64_t total = 0;
    for (int64_t c = 0; c < chunks; ++c) total += hits[c * k + o];
    const double p = static_cast<double>(total) / static_cast<double>(samples);
    result.push_back({offsets[o], p / slab_width,
                      std::sqrt(p * (1.0 - p) / samples) / slab_width, total,
                      samples});
  }
  return result;
}

absl::StatusOr<DistanceDensity> DistanceDensity::Build(
    const PositionalRule& rule, int i, int j, const DensityOptions& options) {
  absl::StatusOr<Hyperplane> plane = Hyperplane::ForPair(rule, i, j);
  if (!plane.ok()) return plane.status();
  if (options.grid_points < 3) {
    return MakeError(ErrorKind::kDomain, "density grid needs >= 3 points");
  }
  const int points = options.grid_points;
  const bool exact = plane->dimension() <= kMaxExactDimension;
  // The sampled path only tabulates where the mass is: for unit-norm,
  // zero-sum beta, Var(D) = 1 / (n (n + 1)) under the uniform simplex.
  double range = kSqrt2;
  if (!exact) {
    const auto [lo, hi] = plane->Support();
    const double n = static_cast<double>(plane->dimension());
    range = std::min({kSqrt2, std::max(-lo, hi),
                      kMonteCarloRangeSds / std::sqrt(n * (n + 1.0))});
  }
  const double spacing = range / (points - 1);
  std::vector<double> grid(points);
  for (int g = 0; g < points; ++g) grid[g] = g * spacing;
  std::vector<double> values(points, 0.0);
  std::vector<double> errors(points, 0.0);

  if (exact) {
    std::vector<double> knots = SortedKnots(*plane);
    ParallelFor(points, options.threads, [&](int64_t g) {
      values[g] = grid[g] >= kSqrt2 ? 0.0 : BSplineDensity(knots, grid[g]);
    });
    return DistanceDensity(*std::move(plane), true, std::move(knots),
                           std::move(grid), std::move(values),
                           std::move(errors));
  }

  // Folded histogram of |D|: bin g collects |D| in [(g - 1/2) h, (g + 1/2) h),
  // which has total width h for g = 0 and 2h otherwise.
  const int64_t samples = options.monte_carlo_samples;
  const int64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<int64_t> counts(chunks * points, 0);
  const Hyperplane& h = *plane;
  ParallelFor(chunks, options.threads, [&](int64_t chunk) {
    Engine rng = MakeEngine(DeriveSeed(options.seed, chunk));
    const int64_t begin = chunk * kMonteCarloChunk;
    const int64_t end = std::min(samples, begin + kMonteCarloChunk);
    int64_t* local = &counts[chunk * points];
    for (int64_t s = begin; s < end; ++s) {
      const std::vector<double> v = SampleSimplexUniform(h.dimension(), rng);
      const double d =
          std::inner_product(v.begin(), v.end(), h.normal().begin(), 0.0);
      const int64_t bin =
          static_cast<int64_t>(std::floor(std::abs(d) / spacing + 0.5));
      if (bin < points) ++local[bin];
    }
  });
  for (int g = 0; g < points; ++g) {
    int64_t total = 0;
    for (int64_t c = 0; c < chunks; ++c) total += counts[c * points + g];
    const double width = g == 0 ? spacing : 2.0 * spacing;
    const double p = static_cast<double>(total) / static_cast<double>(samples);
    values[g] = p / width;
    errors[g] = std::sqrt(p * (1.0 - p) / samples) / width;
  }
  return DistanceDensity(*std::move(plane), false, {}, std::move(grid),
                         std::move(values), std::move(errors));
}

double DistanceDensity::operator()(double l) const {
  const double x = std::abs(l);
  if (x >= kSqrt2) return 0.0;
  if (exact_) return BSplineDensity(knots_, x);
  const double spacing = grid_[1] - grid_[0];
  if (x > grid_.back()) return 0.0;
  const size_t g = static_cast<size_t>(x / spacing);
  if (g + 1 >= grid_.size()) return values_.back();
  const double t = (x - grid_[g]) / spacing;
  return (1.0 - t) * values_[g] + t * values_[g + 1];
}

double DistanceDensity::HalfMass() const {
  return SimpsonUniform(values_, grid_[1] - grid_[0]);
}

}  // namespace dprank
