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

#ifndef MODAUDIT_ERROR_HPP_
#define MODAUDIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace modaudit {

// Every failure carries a machine-readable kind. Fatal conditions are thrown
// as AuditError; per-item failures inside batch operations are captured as
// ErrorRecord entries in a ledger instead of aborting the batch.
enum class ErrorKind {
  kConfig,
  kIo,
  kParse,
  kDuplicateId,
  kMissingField,
  kInvalidLabel,
  kUnmappedLabel,
  kSingleClassCorpus,
  kBudgetTooSmall,
  kCredentialMissing,
  kRateLimitExhausted,
  kMalformedResponse,
  kTextRejected,
  kUnknownCategory,
  kUnknownGroup,
  kCacheMiss,
  kCorruptCache,
  kMalformedTemplate,
  kAxisWithoutAnchor,
  kDegenerateLabels,
  kSubgroupEmpty,
  kBackgroundTooSmall,
  kInsufficientData,
};

const char* ErrorKindName(ErrorKind kind);

class AuditError : public std::runtime_error {
 public:
  AuditError(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " +
                           std::move(message)),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// One ledger entry: which item failed, how, and why.
struct ErrorRecord {
  std::string item_id;
  std::string kind;
  std::string message;

  bool operator==(const ErrorRecord&) const = default;
};

}  // namespace modaudit

#endif  // MODAUDIT_ERROR_HPP_
