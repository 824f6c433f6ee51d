#include "cmr/errors.hpp"

namespace cmr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument:
      return "argument";
    case ErrorKind::kFormat:
      return "format";
    case ErrorKind::kConsistency:
      return "consistency";
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kIo:
      return "io";
    case ErrorKind::kNumeric:
      return "numeric";
  }
  return "unknown";
}

}  // namespace cmr
