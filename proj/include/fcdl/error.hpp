#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fcdl {

enum class ErrorKind {
  kParseError,
  kDuplicateId,
  kMissingField,
  kUnknownSegment,
  kEmptyCorpus,
  kEmptyList,
  kEmptyInput,
  kEmptyText,
  kUnknownNode,
  kKindMismatch,
  kSelfMerge,
  kUnsupportedFormat,
  kInvalidArgument,
  kIoError,
  kUnknownGraph,
  kStaleRevision,
};

/// Name printed after the `fcdl:` prefix, e.g. "DuplicateId".
std::string_view kind_name(ErrorKind kind);

/// The single exception type thrown by the library. The kind is what callers
/// dispatch on (exit codes, HTTP status); the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fcdl
