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

#include "dprank/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"

namespace dprank {
namespace {

constexpr absl::string_view kErrorKindUrl = "type.dprank/error_kind";

constexpr std::array<std::pair<ErrorKind, absl::string_view>, 10> kKindNames = {{
    {ErrorKind::kInvalidPermutation, "invalid-permutation"},
    {ErrorKind::kDimension, "dimension"},
    {ErrorKind::kDegenerateInput, "degenerate-input"},
    {ErrorKind::kInvalidPair, "invalid-pair"},
    {ErrorKind::kUnsupported, "unsupported"},
    {ErrorKind::kNoInteriorMinimum, "no-interior-minimum"},
    {ErrorKind::kDomain, "domain"},
    {ErrorKind::kParse, "parse"},
    {ErrorKind::kConfig, "config"},
    {ErrorKind::kInvariantViolation, "invariant-violation"},
}};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnsupported:
      return absl::StatusCode::kUnimplemented;
    case ErrorKind::kNoInteriorMinimum:
    case ErrorKind::kInvariantViolation:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kDomain:
      return absl::StatusCode::kOutOfRange;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  absl::Status status(CodeFor(kind), message);
  status.SetPayload(kErrorKindUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  absl::optional<absl::Cord> payload = status.GetPayload(kErrorKindUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

}  // namespace dprank
