#include "nadp/error.hpp"

namespace nadp {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnsupportedFormat: return "unsupported format";
    case Errc::CorruptFile: return "corrupt file";
    case Errc::IoFailure: return "i/o failure";
    case Errc::EmptySignal: return "empty signal";
    case Errc::InvalidConfig: return "invalid config";
    case Errc::CodeOutOfRange: return "code out of range";
    case Errc::FrameTooShort: return "frame too short";
    case Errc::SingularNormalEquations: return "singular normal equations";
    case Errc::BadMagic: return "bad magic";
    case Errc::VersionMismatch: return "version mismatch";
    case Errc::TruncatedPayload: return "truncated payload";
    case Errc::ZeroSignal: return "zero signal";
  }
  return "unknown error";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace nadp
