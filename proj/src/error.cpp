/*
 * Copyright 2026 The modaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "modaudit/error.hpp"

namespace modaudit {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return "config-error";
    case ErrorKind::kIo:
      return "io-error";
    case ErrorKind::kParse:
      return "parse-error";
    case ErrorKind::kDuplicateId:
      return "duplicate-id";
    case ErrorKind::kMissingField:
      return "missing-required-field";
    case ErrorKind::kInvalidLabel:
      return "invalid-label";
    case ErrorKind::kUnmappedLabel:
      return "unmapped-label";
    case ErrorKind::kSingleClassCorpus:
      return "single-class-corpus";
    case ErrorKind::kBudgetTooSmall:
      return "budget-too-small";
    case ErrorKind::kCredentialMissing:
      return "credential-missing";
    case ErrorKind::kRateLimitExhausted:
      return "rate-limit-exhausted";
    case ErrorKind::kMalformedResponse:
      return "malformed-response";
    case ErrorKind::kTextRejected:
      return "text-rejected";
    case ErrorKind::kUnknownCategory:
      return "unknown-category";
    case ErrorKind::kUnknownGroup:
      return "unknown-group";
    case ErrorKind::kCacheMiss:
      return "cache-miss";
    case ErrorKind::kCorruptCache:
      return "corrupt-cache";
    case ErrorKind::kMalformedTemplate:
      return "malformed-template";
    case ErrorKind::kAxisWithoutAnchor:
      return "axis-without-anchor";
    case ErrorKind::kDegenerateLabels:
      return "degenerate-labels";
    case ErrorKind::kSubgroupEmpty:
      return "subgroup-empty";
    case ErrorKind::kBackgroundTooSmall:
      return "background-too-small";
    case ErrorKind::kInsufficientData:
      return "insufficient-data";
  }
  return "unknown-error";
}

}  // namespace modaudit
