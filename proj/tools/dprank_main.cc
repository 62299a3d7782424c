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

// dprank: private rank aggregation experiments from the command line.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dprank/bounds.h"
#include "dprank/geometry.h"
#include "dprank/io.h"
#include "dprank/privacy.h"
#include "dprank/ranking.h"
#include "dprank/simulator.h"
#include "dprank/status.h"

namespace dprank {
namespace {

constexpr int kExitIo = 1;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitDimension = 4;
constexpr int kExitInvariant = 5;
constexpr int kExitUnsupported = 6;
constexpr int kExitInput = 7;

int ExitCodeFor(const absl::Status& status) {
  const std::optional<ErrorKind> kind = ErrorKindOf(status);
  if (!kind.has_value()) return kExitIo;
  switch (*kind) {
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kConfig:
      return kExitConfig;
    case ErrorKind::kDimension:
      return kExitDimension;
    case ErrorKind::kInvariantViolation:
      return kExitInvariant;
    case ErrorKind::kUnsupported:
      return kExitUnsupported;
    default:
      return kExitInput;
  }
}

int Fail(const absl::Status& status) {
  std::cerr << "dprank: " << status.message() << "\n";
  return ExitCodeFor(status);
}

struct CommonFlags {
  int candidates = 3;
  std::string rule = "borda";
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> delta_scale;
  int64_t voters = 2000;
  uint64_t seed = 1;
  int threads = 1;
  std::string out;
};

void AddPrivacyFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--epsilon", f.epsilon, "privacy parameter epsilon > 0");
  auto* delta = cmd->add_option("--delta", f.delta, "fixed delta in (0, 1)");
  cmd->add_option("--delta-scale", f.delta_scale, "delta = scale / voters")
      ->excludes(delta);
}

void AddRuleFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--candidates", f.candidates, "number of candidates M")
      ->capture_default_str();
  cmd->add_option("--rule", f.rule, "borda | plurality | custom:s1,...,sM")
      ->capture_default_str();
}

absl::StatusOr<PrivacyParams> ResolveParams(const CommonFlags& f,
                                            int64_t voters) {
  if (!f.epsilon.has_value()) {
    return MakeError(ErrorKind::kConfig, "--epsilon is required");
  }
  if (*f.epsilon < kSaturatingEpsilon) {
    std::cerr << "dprank: warning: epsilon " << *f.epsilon
              << " is so small that the noise swamps every profile\n";
  }
  if (f.delta_scale.has_value()) {
    return PrivacyParams::WithDeltaScale(*f.epsilon, *f.delta_scale, voters);
  }
  return PrivacyParams::Create(*f.epsilon, f.delta.value_or(5e-4), voters);
}

// Writes `body` to --out (plus a manifest) or to stdout.
absl::Status Emit(const CommonFlags& f, const std::string& body,
                  const std::string& manifest) {
  if (f.out.empty()) {
    std::cout << body;
    return absl::OkStatus();
  }
  if (absl::Status s = WriteFile(f.out, body); !s.ok()) return s;
  return WriteFile(f.out + ".manifest", manifest);
}

std::string FlagManifest(
    absl::string_view command,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out = absl::StrCat("# dprank run manifest\ncommand = ", command,
                                 "\ndprank_version = 0.1.0\n");
  for (const auto& [key, value] : entries) {
    absl::StrAppend(&out, key, " = ", value, "\n");
  }
  return out;
}

std::string Join(std::span<const double> xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    absl::StrAppend(&out, i ? "," : "", FormatReal(xs[i]));
  }
  return out;
}

// Textbook Borda matrix for three candidates with columns in the cyclic
// listing abc, acb, cab, cba, bca, bac.
absl::Status CheckCyclicOrder(const PositionalRule& rule) {
  if (rule.kind() != PositionalRule::Kind::kBorda ||
      rule.num_candidates() != 3) {
    return MakeError(ErrorKind::kUnsupported,
                     "--check-paper-order needs --rule borda --candidates 3");
  }
  static constexpr double kExpected[3][6] = {{1, 1, 0.5, 0, 0, 0.5},
                                             {0.5, 0, 0, 0.5, 1, 1},
                                             {0, 0.5, 1, 1, 0.5, 0}};
  absl::StatusOr<ScoreMatrix> matrix = ScoreMatrix::Build(rule);
  if (!matrix.ok()) return matrix.status();
  for (int64_t k = 0; k < 6; ++k) {
    absl::StatusOr<Permutation> p = PermutationAt(3, k);
    const int column = *PaperOrderIndex(*p);
    for (int c = 0; c < 3; ++c) {
      if (matrix->at(c, k) != kExpected[c][column]) {
        return MakeError(ErrorKind::kInvariantViolation,
                         absl::StrCat("score matrix mismatch at candidate ", c,
                                      ", ballot ", p->ToString()));
      }
    }
  }
  return absl::OkStatus();
}

struct AggregateFlags {
  std::string ballots;
  std::string histogram;
  std::string export_histogram;
  bool check_order = false;
};

int RunAggregate(const CommonFlags& f, const AggregateFlags& a) {
  absl::StatusOr<PositionalRule> rule = PositionalRule::Parse(f.rule, f.candidates);
  if (a.check_order) {
    if (!rule.ok()) return Fail(rule.status());
    if (absl::Status s = CheckCyclicOrder(*rule); !s.ok()) return Fail(s);
    std::cout << "score matrix matches the cyclic-order Borda table\n";
    if (a.ballots.empty() && a.histogram.empty()) return 0;
  }
  if (a.ballots.empty() == a.histogram.empty()) {
    return Fail(MakeError(ErrorKind::kConfig,
                          "give exactly one of --ballots or --histogram"));
  }
  std::optional<Histogram> histogram;
  if (!a.ballots.empty()) {
    absl::StatusOr<std::string> text = ReadFile(a.ballots);
    if (!text.ok()) return Fail(text.status());
    absl::StatusOr<std::vector<Permutation>> ballots = ParseBallots(*text);
    if (!ballots.ok()) return Fail(ballots.status());
    const int m = ballots->front().size();
    absl::StatusOr<Histogram> h = Histogram::FromBallots(m, *ballots);
    if (!h.ok()) return Fail(h.status());
    histogram = *std::move(h);
  } else {
    absl::StatusOr<std::string> text = ReadFile(a.histogram);
    if (!text.ok()) return Fail(text.status());
    absl::StatusOr<Histogram> h = ParseHistogramCsv(*text, f.candidates);
    if (!h.ok()) return Fail(h.status());
    histogram = *std::move(h);
  }
  const int m = histogram->num_candidates();
  rule = PositionalRule::Parse(f.rule, m);
  if (!rule.ok()) return Fail(rule.status());
  if (histogram->Total() <= 0) {
    return Fail(MakeError(ErrorKind::kDegenerateInput, "no ballots"));
  }
  if (!a.export_histogram.empty()) {
    if (absl::Status s =
            WriteFile(a.export_histogram, RenderHistogramCsv(*histogram));
        !s.ok()) {
      return Fail(s);
    }
  }

  absl::StatusOr<Ranking> truth = Aggregate(*rule, *histogram);
  if (!truth.ok()) return Fail(truth.status());
  std::string body = absl::StrCat("ranking: ", truth->order.ToString(),
                                  "\nscores: ", Join(truth->scores), "\n");
  if (truth->tied) absl::StrAppend(&body, "tie: yes\n");

  const int64_t voters = static_cast<int64_t>(std::llround(histogram->Total()));
  std::vector<std::pair<std::string, std::string>> manifest = {
      {"input", a.ballots.empty() ? a.histogram : a.ballots},
      {"candidates", absl::StrCat(m)},
      {"rule", rule->ToString()}};
  if (f.epsilon.has_value()) {
    absl::StatusOr<PrivacyParams> params = ResolveParams(f, voters);
    if (!params.ok()) return Fail(params.status());
    const NoisySample<Histogram> noisy =
        AddNoise(*histogram, *params, RngSeed{f.seed});
    absl::StatusOr<Ranking> released = Aggregate(*rule, noisy.value);
    if (!released.ok()) return Fail(released.status());
    absl::StrAppend(&body, "noisy_ranking: ", released->order.ToString(),
                    "\nnoisy_scores: ", Join(released->scores), "\nchanged: ",
                    released->order == truth->order ? "no" : "yes", "\n");
    manifest.insert(manifest.end(),
                    {{"epsilon", FormatReal(params->epsilon())},
                     {"delta", FormatReal(params->delta())},
                     {"voters", absl::StrCat(voters)},
                     {"seed", absl::StrCat(f.seed)}});
  }
  if (absl::Status s = Emit(f, body, FlagManifest("aggregate", manifest));
      !s.ok()) {
    return Fail(s);
  }
  return 0;
}

struct BoundFlags {
  std::string method = "all";
  std::optional<double> tau;
};

int RunBound(const CommonFlags& f, const BoundFlags& b) {
  absl::StatusOr<PrivacyParams> params = ResolveParams(f, f.voters);
  if (!params.ok()) return Fail(params.status());
  absl::StatusOr<PositionalRule> rule = PositionalRule::Parse(f.rule, f.candidates);
  if (!rule.ok()) return Fail(rule.status());
  std::vector<BoundMethod> methods;
  if (b.method == "all") {
    methods = {BoundMethod::kTheorem1, BoundMethod::kLemma3,
               BoundMethod::kSimplified, BoundMethod::kRuleSpecific};
  } else {
    absl::StatusOr<BoundMethod> m = ParseBoundMethod(b.method);
    if (!m.ok()) return Fail(m.status());
    methods = {*m};
  }
  const BoundQuery query{f.candidates, *params, b.tau, *rule};
  std::string body = absl::StrCat(kBoundCsvHeader, "\n");
  std::optional<double> theorem1, lemma3, rule_specific;
  for (BoundMethod method : methods) {
    absl::StatusOr<BoundResult> r;
    switch (method) {
      case BoundMethod::kTheorem1:
        r = Theorem1Bound(query);
        break;
      case BoundMethod::kLemma3:
        r = Lemma3Bound(query);
        break;
      case BoundMethod::kSimplified:
        r = SimplifiedBound(query);
        break;
      case BoundMethod::kRuleSpecific:
        r = RuleSpecificBound(query);
        break;
    }
    if (!r.ok()) {
      // With --method all an unsupported rule bound is skipped, not fatal.
      if (methods.size() > 1 &&
          ErrorKindOf(r.status()) == ErrorKind::kUnsupported) {
        std::cerr << "dprank: skipping " << BoundMethodName(method) << ": "
                  << r.status().message() << "\n";
        continue;
      }
      return Fail(r.status());
    }
    absl::StrAppend(&body, RenderBoundRow(f.candidates, *params, *r));
    if (method == BoundMethod::kTheorem1) theorem1 = r->value;
    if (method == BoundMethod::kLemma3) lemma3 = r->value;
    if (method == BoundMethod::kRuleSpecific) rule_specific = r->value;
  }
  std::vector<std::pair<std::string, std::string>> manifest = {
      {"candidates", absl::StrCat(f.candidates)},
      {"rule", rule->ToString()},
      {"epsilon", FormatReal(params->epsilon())},
      {"delta", FormatReal(params->delta())},
      {"voters", absl::StrCat(f.voters)},
      {"method", b.method}};
  if (b.tau.has_value()) manifest.push_back({"tau", FormatReal(*b.tau)});
  if (absl::Status s = Emit(f, body, FlagManifest("bound", manifest));
      !s.ok()) {
    return Fail(s);
  }

  constexpr double kSlack = 1e-9;
  std::vector<std::string> violations;
  if (rule_specific && lemma3 && *rule_specific > *lemma3 + kSlack) {
    violations.push_back(absl::StrFormat("ruleSpecific %.6g > lemma3 %.6g",
                                         *rule_specific, *lemma3));
  }
  if (lemma3 && theorem1 && *lemma3 > *theorem1 + kSlack) {
    violations.push_back(absl::StrFormat("lemma3 %.6g > theorem1 %.6g",
                                         *lemma3, *theorem1));
  }
  if (!violations.empty()) {
    return Fail(MakeError(ErrorKind::kInvariantViolation,
                          absl::StrCat("dominance chain violated: ",
                                       absl::StrJoin(violations, "; "))));
  }
  return 0;
}

int RunExperiment(const CommonFlags& f, const ExperimentConfig& config) {
  absl::StatusOr<std::vector<SweepRow>> rows = Sweep(config);
  if (!rows.ok()) return Fail(rows.status());
  if (absl::Status s = Emit(f, RenderSweepCsv(*rows), RenderManifest(config));
      !s.ok()) {
    return Fail(s);
  }
  return 0;
}

int RunSimulate(const CommonFlags& f, int64_t trials) {
  absl::StatusOr<PositionalRule> rule = PositionalRule::Parse(f.rule, f.candidates);
  if (!rule.ok()) return Fail(rule.status());
  if (!f.epsilon.has_value()) {
    return Fail(MakeError(ErrorKind::kConfig, "--epsilon is required"));
  }
  if (*f.epsilon < kSaturatingEpsilon) {
    std::cerr << "dprank: warning: epsilon " << *f.epsilon
              << " is so small that the noise swamps every profile\n";
  }
  ExperimentConfig config;
  config.rule = *rule;
  config.epsilon = *f.epsilon;
  config.voters = f.voters;
  config.delta = f.delta_scale.has_value()
                     ? DeltaSpec::PerVoter(*f.delta_scale)
                     : DeltaSpec::Fixed(f.delta.value_or(5e-4));
  config.trials = trials;
  config.seed = RngSeed{f.seed};
  config.threads = f.threads;
  if (absl::Status s = config.Validate(); !s.ok()) return Fail(s);
  return RunExperiment(f, config);
}

int RunSweep(const CommonFlags& f, const std::string& path,
             std::optional<int> threads) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return Fail(text.status());
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(*text);
  if (!config.ok()) return Fail(config.status());
  if (threads.has_value()) config->threads = *threads;
  return RunExperiment(f, *config);
}

int RunDensity(const CommonFlags& f, int grid, std::pair<int, int> pair) {
  absl::StatusOr<PositionalRule> rule = PositionalRule::Parse(f.rule, f.candidates);
  if (!rule.ok()) return Fail(rule.status());
  DensityOptions options;
  options.grid_points = grid;
  options.seed = RngSeed{f.seed};
  options.threads = f.threads;
  absl::StatusOr<DistanceDensity> density =
      DistanceDensity::Build(*rule, pair.first, pair.second, options);
  if (!density.ok()) return Fail(density.status());
  const std::string manifest = FlagManifest(
      "density", {{"candidates", absl::StrCat(f.candidates)},
                  {"rule", rule->ToString()},
                  {"pair", absl::StrCat(pair.first, ",", pair.second)},
                  {"grid", absl::StrCat(grid)},
                  {"exact", density->exact() ? "true" : "false"},
                  {"seed", absl::StrCat(f.seed)}});
  if (absl::Status s = Emit(f, RenderDensityCsv(*density), manifest);
      !s.ok()) {
    return Fail(s);
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private rank aggregation: aggregate, bound, "
               "simulate, sweep, density"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dprank 0.1.0");

  CommonFlags common;
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.out,
                    "output file; a .manifest file is written next to it");
  };

  AggregateFlags agg;
  CLI::App* aggregate = app.add_subcommand("aggregate", "aggregate ballots");
  AddRuleFlags(aggregate, common);
  AddPrivacyFlags(aggregate, common);
  aggregate->add_option("--ballots", agg.ballots,
                        "one ranking per line, e.g. 2,0,1");
  aggregate->add_option("--histogram", agg.histogram,
                        "CSV with header perm_index,count");
  aggregate->add_option("--export-histogram", agg.export_histogram,
                        "write the ballot histogram as CSV");
  aggregate->add_option("--seed", common.seed, "noise seed");
  aggregate->add_flag("--check-paper-order", agg.check_order,
                      "compare the M=3 Borda matrix with the cyclic-order "
                      "(abc, acb, cab, cba, bca, bac) table");
  add_out(aggregate);

  BoundFlags bnd;
  CLI::App* bound = app.add_subcommand("bound", "analytical error bounds");
  AddRuleFlags(bound, common);
  AddPrivacyFlags(bound, common);
  bound->add_option("--voters", common.voters, "number of voters N")
      ->capture_default_str();
  bound->add_option("--method", bnd.method,
                    "theorem1 | lemma3 | simplified | ruleSpecific | all")
      ->capture_default_str();
  bound->add_option("--tau", bnd.tau, "evaluate at this slab half-width");
  add_out(bound);

  int64_t trials = 10000;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo error rate at one point");
  AddRuleFlags(simulate, common);
  AddPrivacyFlags(simulate, common);
  simulate->add_option("--voters", common.voters, "number of voters N")
      ->capture_default_str();
  simulate->add_option("--trials", trials)->capture_default_str();
  simulate->add_option("--seed", common.seed)->capture_default_str();
  simulate->add_option("--threads", common.threads)->capture_default_str();
  add_out(simulate);

  std::string config_path;
  std::optional<int> sweep_threads;
  CLI::App* sweep = app.add_subcommand("sweep", "run an experiment file");
  sweep->add_option("config", config_path, "key = value experiment file")
      ->required();
  sweep->add_option("--threads", sweep_threads,
                    "worker threads (results do not depend on it)");
  add_out(sweep);

  int grid = 512;
  std::pair<int, int> pair{0, 1};
  CLI::App* density =
      app.add_subcommand("density", "export the distance density grid");
  AddRuleFlags(density, common);
  density->add_option("--grid", grid, "grid points on [0, sqrt2]")
      ->capture_default_str();
  density->add_option("--pair", pair, "candidate pair i j");
  density->add_option("--seed", common.seed)->capture_default_str();
  density->add_option("--threads", common.threads)->capture_default_str();
  add_out(density);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (aggregate->parsed()) return RunAggregate(common, agg);
  if (bound->parsed()) return RunBound(common, bnd);
  if (simulate->parsed()) return RunSimulate(common, trials);
  if (sweep->parsed()) return RunSweep(common, config_path, sweep_threads);
  return RunDensity(common, grid, pair);
}

}  // namespace
}  // namespace dprank

int main(int argc, char** argv) { return dprank::Main(argc, argv); }
