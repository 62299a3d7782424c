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

#ifndef DPRANK_STATUS_H_
#define DPRANK_STATUS_H_

#include <optional>

#include "absl/strings/string_view.h"
#include "absl/status/status.h"

namespace dprank {

// Failure categories carried as a payload on absl::Status so callers (mainly
// the CLI) can distinguish them without parsing messages.
enum class ErrorKind {
  kInvalidPermutation,
  kDimension,
  kDegenerateInput,
  kInvalidPair,
  kUnsupported,
  kNoInteriorMinimum,
  kDomain,
  kParse,
  kConfig,
  kInvariantViolation,
};

absl::Status MakeError(ErrorKind kind, absl::string_view message);

// Returns the kind attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

absl::string_view ErrorKindName(ErrorKind kind);

}  // namespace dprank

#endif  // DPRANK_STATUS_H_
