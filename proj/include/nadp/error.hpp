#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nadp {

enum class Errc {
  UnsupportedFormat,
  CorruptFile,
  IoFailure,
  EmptySignal,
  InvalidConfig,
  CodeOutOfRange,
  FrameTooShort,
  SingularNormalEquations,
  BadMagic,
  VersionMismatch,
  TruncatedPayload,
  ZeroSignal,
};

std::string_view to_string(Errc code);

/// Library-wide exception. Every failure raised by nadp carries one of the
/// Errc kinds so callers (the CLI in particular) can map it without parsing
/// messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nadp
