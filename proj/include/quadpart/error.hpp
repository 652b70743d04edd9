#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quadpart {

enum class Errc {
  NotSquarefree,
  OutOfRange,
  CtxMismatch,
  NotTotallyPositive,
  BadIndex,
  InternalError,
  TooLarge,
  Overflow,
  ParseError,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::CtxMismatch: return "CtxMismatch";
    case Errc::NotTotallyPositive: return "NotTotallyPositive";
    case Errc::BadIndex: return "BadIndex";
    case Errc::InternalError: return "InternalError";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Overflow: return "Overflow";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above; the
// message is prefixed with the code name so it survives plain what() logging.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace quadpart
