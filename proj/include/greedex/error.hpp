#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace greedex {

enum class ErrorKind {
  EmptyVector,
  NoAdmissibleAtom,
  ZeroAtom,
  SupportOutsideEPrime,
  NotOrthogonal,
  IndexPastEnd,
  ConfigInvalid,
  PreconditionUnmet,
  Unsupported,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyVector: return "EmptyVector";
    case ErrorKind::NoAdmissibleAtom: return "NoAdmissibleAtom";
    case ErrorKind::ZeroAtom: return "ZeroAtom";
    case ErrorKind::SupportOutsideEPrime: return "SupportOutsideEPrime";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::IndexPastEnd: return "IndexPastEnd";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace greedex
