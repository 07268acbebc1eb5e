#include "fcdl/error.hpp"

namespace fcdl {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kMissingField: return "MissingField";
    case ErrorKind::kUnknownSegment: return "UnknownSegment";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kEmptyList: return "EmptyList";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kEmptyText: return "EmptyText";
    case ErrorKind::kUnknownNode: return "UnknownNode";
    case ErrorKind::kKindMismatch: return "KindMismatch";
    case ErrorKind::kSelfMerge: return "SelfMerge";
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kUnknownGraph: return "UnknownGraph";
    case ErrorKind::kStaleRevision: return "StaleRevision";
  }
  return "Unknown";
}

}  // namespace fcdl
