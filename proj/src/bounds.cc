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

#include "dprank/bounds.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "dprank/status.h"

namespace dprank {
namespace {

constexpr int kTauScanPoints = 65;
constexpr int kQuadratureNodes = 512;
// Q(x) underflows to zero in double precision beyond this argument.
constexpr double kQCutoff = 40.0;
// LogQFunction switches to the asymptotic series here; eight terms are
// accurate to double precision from this point on.
constexpr double kLogQAsymptotic = 30.0;
// Above this M! the rule-specific integrand reads p_D from a dense table.
constexpr int64_t kTableThreshold = 120;
constexpr int kTablePoints = 2049;

double Pairs(int m) { return 0.5 * m * (m - 1); }

// M! - 1 in floating point; bounds accept M beyond the histogram limit.
double FactorialMinusOne(int m) { return std::tgamma(m + 1.0) - 1.0; }

double Log2OverDelta(const PrivacyParams& params) {
  return std::log(2.0 / params.delta());
}

// eps N / sqrt(2 ln(2/delta)) = 1 / sigmaHat.
double InverseSigmaHat(const PrivacyParams& params) {
  return 1.0 / SigmaHat(params);
}

absl::Status CheckCandidates(int m) {
  if (m < kMinCandidates) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("need M >= ", kMinCandidates, ", got ", m));
  }
  return absl::OkStatus();
}

absl::Status CheckTau(std::optional<double> tau) {
  if (tau.has_value() && !(*tau > 0.0 && *tau <= kSqrt2)) {
    return MakeError(ErrorKind::kDomain,
                     absl::StrCat("tau must lie in (0, sqrt2], got ", *tau));
  }
  return absl::OkStatus();
}

BoundResult MakeResult(double raw, double tau, BoundMethod method) {
  return BoundResult{std::min(raw, 1.0), raw, tau, method, std::log(raw)};
}

BoundResult MakeLogResult(double log_raw, double tau, BoundMethod method) {
  const double raw = std::exp(log_raw);
  return BoundResult{std::min(raw, 1.0), raw, tau, method, log_raw};
}

double LogAddExp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

absl::string_view BoundMethodName(BoundMethod method) {
  switch (method) {
    case BoundMethod::kTheorem1:
      return "theorem1";
    case BoundMethod::kLemma3:
      return "lemma3";
    case BoundMethod::kSimplified:
      return "simplified";
    case BoundMethod::kRuleSpecific:
      return "ruleSpecific";
  }
  return "unknown";
}

absl::StatusOr<BoundMethod> ParseBoundMethod(absl::string_view name) {
  for (BoundMethod m : {BoundMethod::kTheorem1, BoundMethod::kLemma3,
                        BoundMethod::kSimplified, BoundMethod::kRuleSpecific}) {
    if (name == BoundMethodName(m)) return m;
  }
  if (name == "rule-specific" || name == "rule") {
    return BoundMethod::kRuleSpecific;
  }
  return MakeError(ErrorKind::kParse,
                   absl::StrCat("unknown bound method '", name, "'"));
}

double QFunction(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double LogQFunction(double x) {
  if (x < kLogQAsymptotic) return std::log(QFunction(x));
  // Q(x) = phi(x) / x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...).
  const double inv2 = 1.0 / (x * x);
  double term = 1.0, series = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2 * k - 1) * inv2;
    series += term;
  }
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2 * std::numbers::pi) +
         std::log(series);
}

double Theorem1Expression(int m, const PrivacyParams& params, double tau) {
  return Pairs(m) * FactorialMinusOne(m) / std::numbers::sqrt2 * tau +
         QFunction(tau * InverseSigmaHat(params));
}

double Lemma3Expression(int m, const PrivacyParams& params, double tau) {
  const double x = tau * InverseSigmaHat(params);
  return Pairs(m) * std::numbers::sqrt2 * FactorialMinusOne(m) *
             QFunction(0.5 * x) * tau +
         QFunction(x);
}

double Lemma3LogExpression(int m, const PrivacyParams& params, double tau) {
  const double x = tau * InverseSigmaHat(params);
  const double log_first =
      std::log(Pairs(m) * std::numbers::sqrt2 * FactorialMinusOne(m) * tau) +
      LogQFunction(0.5 * x);
  return LogAddExp(log_first, LogQFunction(x));
}

absl::StatusOr<double> OptimalTau(int m, const PrivacyParams& params) {
  if (absl::Status s = CheckCandidates(m); !s.ok()) return s;
  // Setting the tau-derivative to zero gives phi(tau / sigmaHat) = A sigmaHat
  // with A = C(M,2)(M!-1)/sqrt2, i.e.
  //   (tau / sigmaHat)^2 = -2 ln(M(M-1)(M!-1) sqrt(pi ln(2/delta)) /
  //                              (sqrt2 eps N)).
  const double eps_n = params.epsilon() * static_cast<double>(params.voters());
  const double inner = m * (m - 1.0) * FactorialMinusOne(m) *
                       std::sqrt(std::numbers::pi * Log2OverDelta(params)) /
                       (std::numbers::sqrt2 * eps_n);
  if (!(inner < 1.0)) {
    return MakeError(
        ErrorKind::kNoInteriorMinimum,
        absl::StrCat("eps*N = ", eps_n,
                     " too small for an interior minimum (log argument ",
                     inner, " >= 1)"));
  }
  return SigmaHat(params) * std::sqrt(-2.0 * std::log(inner));
}

ScalarMinimum MinimizeOverTau(const std::function<double(double)>& f,
                              std::optional<double> seed) {
  const double log_lo = std::log(kMinTau);
  const double log_hi = std::log(kSqrt2);
  std::vector<double> taus(kTauScanPoints);
  std::vector<double> values(kTauScanPoints);
  for (int k = 0; k < kTauScanPoints; ++k) {
    taus[k] = k + 1 == kTauScanPoints
                  ? kSqrt2
                  : std::exp(log_lo + (log_hi - log_lo) * k /
                                          (kTauScanPoints - 1));
    values[k] = f(taus[k]);
  }
  const int best = static_cast<int>(
      std::min_element(values.begin(), values.end()) - values.begin());
  const double lo = taus[std::max(best - 1, 0)];
  const double hi = taus[std::min(best + 1, kTauScanPoints - 1)];
  ScalarMinimum result = GoldenSectionMinimize(f, lo, hi, kTauTolerance);
  result.evaluations += kTauScanPoints;
  if (values[best] < result.value) {
    result.argmin = taus[best];
    result.value = values[best];
  }
  if (seed.has_value() && *seed >= kMinTau && *seed <= kSqrt2) {
    const double at_seed = f(*seed);
    ++result.evaluations;
    if (at_seed < result.value) result = {*seed, at_seed, result.evaluations};
  }
  return result;
}

absl::StatusOr<BoundResult> Theorem1Bound(const BoundQuery& query) {
  const int m = query.num_candidates;
  if (absl::Status s = CheckCandidates(m); !s.ok()) return s;
  if (absl::Status s = CheckTau(query.tau); !s.ok()) return s;
  const PrivacyParams& params = query.params;
  if (query.tau.has_value()) {
    return MakeResult(Theorem1Expression(m, params, *query.tau), *query.tau,
                      BoundMethod::kTheorem1);
  }
  absl::StatusOr<double> closed_form = OptimalTau(m, params);
  std::optional<double> seed;
  if (closed_form.ok()) seed = *closed_form;
  const ScalarMinimum best = MinimizeOverTau(
      [&](double tau) { return Theorem1Expression(m, params, tau); }, seed);
  return MakeResult(best.value, best.argmin, BoundMethod::kTheorem1);
}

absl::StatusOr<BoundResult> Lemma3Bound(const BoundQuery& query) {
  const int m = query.num_candidates;
  if (absl::Status s = CheckCandidates(m); !s.ok()) return s;
  if (absl::Status s = CheckTau(query.tau); !s.ok()) return s;
  const PrivacyParams& params = query.params;
  if (query.tau.has_value()) {
    return MakeLogResult(Lemma3LogExpression(m, params, *query.tau),
                         *query.tau, BoundMethod::kLemma3);
  }
  absl::StatusOr<double> closed_form = OptimalTau(m, params);
  std::optional<double> seed;
  if (closed_form.ok()) seed = *closed_form;
  // Minimized in log space: the value itself underflows for large eps N.
  const ScalarMinimum best = MinimizeOverTau(
      [&](double tau) { return Lemma3LogExpression(m, params, tau); }, seed);
  return MakeLogResult(best.value, best.argmin, BoundMethod::kLemma3);
}

absl::StatusOr<BoundResult> SimplifiedBound(const BoundQuery& query) {
  const int m = query.num_candidates;
  if (absl::Status s = CheckCandidates(m); !s.ok()) return s;
  const PrivacyParams& params = query.params;
  if (params.voters() < 2) {
    return MakeError(ErrorKind::kDomain,
                     "simplified bound needs N >= 2 so that ln N > 0");
  }
  const double n = static_cast<double>(params.voters());
  const double log_n = std::log(n);
  const double log_delta = Log2OverDelta(params);
  const double eps = params.epsilon();
  const double tau = 2.0 * std::sqrt(log_n * log_delta) / (eps * n);
  const double raw =
      (Pairs(m) * FactorialMinusOne(m) * std::sqrt(2.0 * log_n * log_delta) /
           eps +
       1.0 / (2.0 * std::sqrt(std::numbers::pi * log_n))) /
      n;
  return MakeResult(raw, tau, BoundMethod::kSimplified);
}

absl::StatusOr<RuleSpecificBounder> RuleSpecificBounder::Create(
    const PositionalRule& rule) {
  if (Factorial(rule.num_candidates()) > kMaxExactDimension) {
    return MakeError(ErrorKind::kUnsupported,
                     absl::StrCat("rule-specific bound needs the exact "
                                  "density (M <= 6), got M=",
                                  rule.num_candidates()));
  }
  absl::StatusOr<DistanceDensity> density = DistanceDensity::Build(rule);
  if (!density.ok()) return density.status();
  auto shared = std::make_shared<const DistanceDensity>(*std::move(density));
  std::vector<double> table;
  if (shared->hyperplane().dimension() > kTableThreshold) {
    const double hi = shared->hyperplane().Support().second;
    table.resize(kTablePoints);
    for (int k = 0; k < kTablePoints; ++k) {
      table[k] = (*shared)(hi * k / (kTablePoints - 1));
    }
  }
  return RuleSpecificBounder(rule, std::move(shared), std::move(table));
}

double RuleSpecificBounder::Density(double l) const {
  if (table_.empty()) return (*density_)(l);
  const double hi = density_->hyperplane().Support().second;
  if (l >= hi) return 0.0;
  const double x = l / hi * (kTablePoints - 1);
  const size_t k = static_cast<size_t>(x);
  const double t = x - k;
  return (1.0 - t) * table_[k] + t * table_[k + 1];
}

double RuleSpecificBounder::Expression(const PrivacyParams& params,
                                       double tau) const {
  const double sigma_hat = SigmaHat(params);
  const double support = density_->hyperplane().Support().second;
  // The integrand vanishes beyond the density's support and, in double
  // precision, beyond kQCutoff noise standard deviations.
  const double upper = std::min({tau, support, kQCutoff * sigma_hat});
  const double integral = SimpsonIntegrate(
      [&](double l) { return Density(l) * QFunction(l / sigma_hat); }, 0.0,
      upper, kQuadratureNodes);
  return Pairs(rule_.num_candidates()) * 2.0 * integral +
         QFunction(tau / sigma_hat);
}

absl::StatusOr<BoundResult> RuleSpecificBounder::Evaluate(
    const PrivacyParams& params, std::optional<double> tau) const {
  if (absl::Status s = CheckTau(tau); !s.ok()) return s;
  if (tau.has_value()) {
    return MakeResult(Expression(params, *tau), *tau,
                      BoundMethod::kRuleSpecific);
  }
  absl::StatusOr<double> closed_form =
      OptimalTau(rule_.num_candidates(), params);
  std::optional<double> seed;
  if (closed_form.ok()) seed = *closed_form;
  const ScalarMinimum best = MinimizeOverTau(
      [&](double t) { return Expression(params, t); }, seed);
  return MakeResult(best.value, best.argmin, BoundMethod::kRuleSpecific);
}

absl::StatusOr<BoundResult> RuleSpecificBound(const BoundQuery& query) {
  if (!query.rule.has_value()) {
    return MakeError(ErrorKind::kUnsupported,
                     "rule-specific bound needs a positional rule");
  }
  if (query.rule->num_candidates() != query.num_candidates) {
    return MakeError(ErrorKind::kDimension,
                     "rule and query disagree on the number of candidates");
  }
  absl::StatusOr<RuleSpecificBounder> bounder =
      RuleSpecificBounder::Create(*query.rule);
  if (!bounder.ok()) return bounder.status();
  return bounder->Evaluate(query.params, query.tau);
}

}  // namespace dprank
