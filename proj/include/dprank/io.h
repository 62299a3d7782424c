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

#ifndef DPRANK_IO_H_
#define DPRANK_IO_H_

#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "dprank/geometry.h"
#include "dprank/ranking.h"
#include "dprank/simulator.h"

namespace dprank {

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

// Reals are written with 17 significant digits so they round-trip exactly.
std::string FormatReal(double x);

// One ballot per line, best first, e.g. "0,2,1". Blank lines and lines
// starting with '#' are skipped. All ballots must rank the same candidates.
absl::StatusOr<std::vector<Permutation>> ParseBallots(absl::string_view text);

// "perm_index,count" CSV with a header line.
absl::StatusOr<Histogram> ParseHistogramCsv(absl::string_view text,
                                            int num_candidates);
std::string RenderHistogramCsv(const Histogram& h);

// A single value, a comma list "a,b,c", or a range "a..b step c" (inclusive
// of b up to rounding).
absl::StatusOr<std::vector<double>> ParseValueList(absl::string_view text);

// Flat "key = value" experiment description. Recognized keys: candidates,
// rule, epsilon, voters, delta, delta_scale, trials, seed, threads. At most
// one of epsilon / voters may be a list; that list becomes the sweep axis.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text);

// Fully resolved config in the same format, with every list expanded. Parsing
// it back reproduces the run exactly.
std::string RenderManifest(const ExperimentConfig& config);

inline constexpr absl::string_view kSweepCsvHeader =
    "axis,value,trials,errors,rate,ci_lo,ci_hi,ties,bound_theorem1,"
    "bound_lemma3,bound_rule";

std::string RenderSweepCsv(const std::vector<SweepRow>& rows);

inline constexpr absl::string_view kBoundCsvHeader =
    "method,M,N,epsilon,delta,tau,value";

std::string RenderBoundRow(int num_candidates, const PrivacyParams& params,
                           const BoundResult& result);

// "l,p_d" rows over the density grid.
std::string RenderDensityCsv(const DistanceDensity& density);

}  // namespace dprank

#endif  // DPRANK_IO_H_
