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

#include "dprank/io.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <algorithm>
#include <map>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dprank/status.h"

namespace dprank {
namespace {

constexpr absl::string_view kVersion = "0.1.0";

absl::StatusOr<double> ParseReal(absl::string_view field) {
  double value;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &value)) {
    return MakeError(ErrorKind::kParse, absl::StrCat("bad number '", field,
                                                     "'"));
  }
  return value;
}

// Snaps a + i*step to the shortest decimal a human would have typed, so a
// range like 0.05..0.24 step 0.01 yields 0.06 rather than 0.060000000000000005.
double Tidy(double x) {
  return std::strtod(absl::StrFormat("%.12g", x).c_str(), nullptr);
}

std::string JoinReals(const std::vector<double>& values) {
  return absl::StrJoin(values, ",", [](std::string* out, double v) {
    absl::StrAppend(out, FormatReal(v));
  });
}

}  // namespace

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  }
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path, "'"));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("short write to '", path, "'"));
}

std::string FormatReal(double x) { return absl::StrFormat("%.17g", x); }

absl::StatusOr<std::vector<Permutation>> ParseBallots(absl::string_view text) {
  std::vector<Permutation> ballots;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<int> order;
    for (absl::string_view field : absl::StrSplit(line, ',')) {
      int id;
      if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(field), &id)) {
        return MakeError(ErrorKind::kParse,
                         absl::StrCat("line ", line_number,
                                      ": bad candidate id '", field, "'"));
      }
      order.push_back(id);
    }
    absl::StatusOr<Permutation> ballot = Permutation::Create(std::move(order));
    if (!ballot.ok()) {
      return MakeError(ErrorKind::kParse,
                       absl::StrCat("line ", line_number, ": ",
                                    ballot.status().message()));
    }
    if (!ballots.empty() && ballot->size() != ballots.front().size()) {
      return MakeError(ErrorKind::kDimension,
                       absl::StrCat("line ", line_number, ": ballot ranks ",
                                    ballot->size(), " candidates, earlier "
                                    "ballots rank ",
                                    ballots.front().size()));
    }
    ballots.push_back(*std::move(ballot));
  }
  if (ballots.empty()) {
    return MakeError(ErrorKind::kDegenerateInput, "no ballots");
  }
  return ballots;
}

absl::StatusOr<Histogram> ParseHistogramCsv(absl::string_view text,
                                            int num_candidates) {
  absl::StatusOr<Histogram> h = Histogram::Zeros(num_candidates);
  if (!h.ok()) return h.status();
  std::vector<double> counts(h->counts().begin(), h->counts().end());
  std::vector<bool> seen(counts.size(), false);
  int line_number = 0;
  bool header = false;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "perm_index,count") {
        return MakeError(ErrorKind::kParse,
                         "histogram CSV must start with 'perm_index,count'");
      }
      header = true;
      continue;
    }
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    int64_t index;
    double count;
    if (fields.size() != 2 ||
        !absl::SimpleAtoi(absl::StripAsciiWhitespace(fields[0]), &index) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(fields[1]), &count)) {
      return MakeError(ErrorKind::kParse,
                       absl::StrCat("line ", line_number, ": malformed row"));
    }
    if (index < 0 || index >= static_cast<int64_t>(counts.size())) {
      return MakeError(ErrorKind::kDimension,
                       absl::StrCat("line ", line_number, ": index ", index,
                                    " outside [0, ", counts.size(), ")"));
    }
    if (seen[index]) {
      return MakeError(ErrorKind::kParse,
                       absl::StrCat("line ", line_number, ": duplicate index ",
                                    index));
    }
    seen[index] = true;
    counts[index] = count;
  }
  if (!header) return MakeError(ErrorKind::kDegenerateInput, "empty file");
  return Histogram::Create(num_candidates, std::move(counts));
}

std::string RenderHistogramCsv(const Histogram& h) {
  std::string out = "perm_index,count\n";
  for (int64_t k = 0; k < h.size(); ++k) {
    absl::StrAppend(&out, k, ",", FormatReal(h[k]), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<double>> ParseValueList(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  std::vector<double> values;
  if (const size_t dots = text.find(".."); dots != absl::string_view::npos) {
    const absl::string_view start_text = text.substr(0, dots);
    absl::string_view rest = text.substr(dots + 2);
    const size_t step_at = rest.find("step");
    if (step_at == absl::string_view::npos) {
      return MakeError(ErrorKind::kParse,
                       absl::StrCat("range '", text, "' needs 'step'"));
    }
    absl::StatusOr<double> start = ParseReal(start_text);
    absl::StatusOr<double> stop = ParseReal(rest.substr(0, step_at));
    absl::StatusOr<double> step = ParseReal(rest.substr(step_at + 4));
    if (!start.ok()) return start.status();
    if (!stop.ok()) return stop.status();
    if (!step.ok()) return step.status();
    if (!(*step > 0.0) || *stop < *start) {
      return MakeError(ErrorKind::kParse,
                       absl::StrCat("range '", text, "' is empty"));
    }
    const int64_t count =
        static_cast<int64_t>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
    for (int64_t i = 0; i < count; ++i) {
      values.push_back(Tidy(*start + i * *step));
    }
    return values;
  }
  for (absl::string_view field : absl::StrSplit(text, ',')) {
    absl::StatusOr<double> v = ParseReal(field);
    if (!v.ok()) return v.status();
    values.push_back(*v);
  }
  return values;
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::vector<std::string> problems;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      problems.push_back(absl::StrCat("line ", line_number, ": missing '='"));
      continue;
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (!entries.emplace(key, value).second) {
      problems.push_back(absl::StrCat(key, " (repeated)"));
    }
  }

  static constexpr absl::string_view kKnown[] = {
      "candidates", "rule",  "epsilon", "voters",  "delta",
      "delta_scale", "trials", "seed",   "threads", "dprank_version"};
  for (const auto& [key, value] : entries) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) ==
        std::end(kKnown)) {
      problems.push_back(absl::StrCat(key, " (unknown key)"));
    }
  }

  ExperimentConfig config;
  auto get = [&](absl::string_view key) -> const std::string* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto get_int = [&](absl::string_view key, int64_t& out) {
    if (const std::string* v = get(key)) {
      if (!absl::SimpleAtoi(*v, &out)) {
        problems.push_back(absl::StrCat(key, " (not an integer)"));
      }
    }
  };

  int64_t candidates = 3;
  get_int("candidates", candidates);
  const std::string rule_text = get("rule") ? *get("rule") : "borda";
  if (candidates < kMinCandidates || candidates > kMaxHistogramCandidates) {
    problems.push_back("candidates (out of range)");
  } else {
    absl::StatusOr<PositionalRule> rule =
        PositionalRule::Parse(rule_text, static_cast<int>(candidates));
    if (rule.ok()) {
      config.rule = *std::move(rule);
    } else {
      problems.push_back(
          absl::StrCat("rule (", rule.status().message(), ")"));
    }
  }

  std::vector<double> epsilons{config.epsilon};
  std::vector<double> voters{static_cast<double>(config.voters)};
  if (const std::string* v = get("epsilon")) {
    absl::StatusOr<std::vector<double>> parsed = ParseValueList(*v);
    if (parsed.ok()) {
      epsilons = *std::move(parsed);
    } else {
      problems.push_back("epsilon (malformed)");
    }
  }
  if (const std::string* v = get("voters")) {
    absl::StatusOr<std::vector<double>> parsed = ParseValueList(*v);
    if (parsed.ok()) {
      voters = *std::move(parsed);
    } else {
      problems.push_back("voters (malformed)");
    }
  }
  if (epsilons.size() > 1 && voters.size() > 1) {
    problems.push_back("epsilon, voters (only one may be a list)");
  } else if (voters.size() > 1) {
    config.axis = SweepAxis::kVoters;
    config.sweep_values = voters;
    config.epsilon = epsilons.front();
    config.voters = static_cast<int64_t>(std::llround(voters.front()));
  } else {
    config.axis = SweepAxis::kEpsilon;
    if (epsilons.size() > 1) config.sweep_values = epsilons;
    config.epsilon = epsilons.front();
    config.voters = static_cast<int64_t>(std::llround(voters.front()));
  }

  const std::string* delta = get("delta");
  const std::string* delta_scale = get("delta_scale");
  if (delta != nullptr && delta_scale != nullptr) {
    problems.push_back("delta, delta_scale (mutually exclusive)");
  } else if (delta_scale != nullptr) {
    absl::StatusOr<double> c = ParseReal(*delta_scale);
    if (c.ok()) {
      config.delta = DeltaSpec::PerVoter(*c);
    } else {
      problems.push_back("delta_scale (malformed)");
    }
  } else if (delta != nullptr) {
    absl::StatusOr<double> d = ParseReal(*delta);
    if (d.ok()) {
      config.delta = DeltaSpec::Fixed(*d);
    } else {
      problems.push_back("delta (malformed)");
    }
  }

  get_int("trials", config.trials);
  if (const std::string* v = get("seed")) {
    uint64_t parsed;
    if (absl::SimpleAtoi(*v, &parsed)) {
      config.seed = RngSeed{parsed};
    } else {
      problems.push_back("seed (not an unsigned integer)");
    }
  }
  int64_t threads = config.threads;
  get_int("threads", threads);
  config.threads = static_cast<int>(threads);

  if (problems.empty()) {
    if (absl::Status s = config.Validate(); !s.ok()) {
      problems.push_back(std::string(s.message()));
    }
  }
  if (!problems.empty()) {
    return MakeError(ErrorKind::kConfig,
                     absl::StrCat("invalid experiment config: ",
                                  absl::StrJoin(problems, "; ")));
  }
  return config;
}

std::string RenderManifest(const ExperimentConfig& config) {
  std::string out = "# dprank run manifest\n";
  absl::StrAppend(&out, "dprank_version = ", kVersion, "\n");
  absl::StrAppend(&out, "candidates = ", config.num_candidates(), "\n");
  absl::StrAppend(&out, "rule = ", config.rule.ToString(), "\n");
  const bool sweep_eps =
      config.axis == SweepAxis::kEpsilon && !config.sweep_values.empty();
  const bool sweep_voters =
      config.axis == SweepAxis::kVoters && !config.sweep_values.empty();
  absl::StrAppend(&out, "epsilon = ",
                  sweep_eps ? JoinReals(config.sweep_values)
                            : FormatReal(config.epsilon),
                  "\n");
  if (sweep_voters) {
    absl::StrAppend(&out, "voters = ",
                    absl::StrJoin(config.sweep_values, ",",
                                  [](std::string* o, double v) {
                                    absl::StrAppend(o, std::llround(v));
                                  }),
                    "\n");
  } else {
    absl::StrAppend(&out, "voters = ", config.voters, "\n");
  }
  if (config.delta.kind == DeltaSpec::Kind::kFixed) {
    absl::StrAppend(&out, "delta = ", FormatReal(config.delta.value), "\n");
  } else {
    absl::StrAppend(&out, "delta_scale = ", FormatReal(config.delta.value),
                    "\n");
  }
  absl::StrAppend(&out, "trials = ", config.trials, "\n");
  absl::StrAppend(&out, "seed = ", config.seed.value, "\n");
  absl::StrAppend(&out, "threads = ", config.threads, "\n");
  return out;
}

std::string RenderSweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = absl::StrCat(kSweepCsvHeader, "\n");
  for (const SweepRow& row : rows) {
    const ErrorRateEstimate& e = row.estimate;
    absl::StrAppend(
        &out, SweepAxisName(row.axis), ",", FormatReal(row.value), ",",
        e.trials, ",", e.errors, ",", FormatReal(e.point_estimate), ",",
        FormatReal(e.ci95.lo), ",", FormatReal(e.ci95.hi), ",", e.tie_count,
        ",", FormatReal(row.theorem1.value), ",", FormatReal(row.lemma3.value),
        ",",
        row.rule_specific.has_value() ? FormatReal(row.rule_specific->value)
                                      : std::string("nan"),
        "\n");
  }
  return out;
}

std::string RenderBoundRow(int num_candidates, const PrivacyParams& params,
                           const BoundResult& result) {
  return absl::StrCat(BoundMethodName(result.method), ",", num_candidates, ",",
                      params.voters(), ",", FormatReal(params.epsilon()), ",",
                      FormatReal(params.delta()), ",", FormatReal(result.tau),
                      ",", FormatReal(result.value), "\n");
}

std::string RenderDensityCsv(const DistanceDensity& density) {
  std::string out = "l,p_d\n";
  for (size_t g = 0; g < density.grid().size(); ++g) {
    absl::StrAppend(&out, FormatReal(density.grid()[g]), ",",
                    FormatReal(density.values()[g]), "\n");
  }
  return out;
}

}  // namespace dprank
