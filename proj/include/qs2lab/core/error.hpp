#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qs2lab {

enum class Errc {
  UnknownRegister,
  DuplicateRegister,
  WidthMismatch,
  LayoutMismatch,
  EmptyKeepSet,
  CapExceeded,
  WidthOverflow,
  InvalidState,
  InvalidArgument,
  NotRecoverable,
  NotPerfectlyCorrect,
  RecoveryCheckFailed,
  NotABijection,
  InconsistentTrapdoor,
  UnsupportedModulus,
  NonInvertibleKeyDraw,
  RecContractViolated,
  GameUndefinedForScheme,
  ConfigError,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnknownRegister: return "UnknownRegister";
    case Errc::DuplicateRegister: return "DuplicateRegister";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::LayoutMismatch: return "LayoutMismatch";
    case Errc::EmptyKeepSet: return "EmptyKeepSet";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::WidthOverflow: return "WidthOverflow";
    case Errc::InvalidState: return "InvalidState";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotRecoverable: return "NotRecoverable";
    case Errc::NotPerfectlyCorrect: return "NotPerfectlyCorrect";
    case Errc::RecoveryCheckFailed: return "RecoveryCheckFailed";
    case Errc::NotABijection: return "NotABijection";
    case Errc::InconsistentTrapdoor: return "InconsistentTrapdoor";
    case Errc::UnsupportedModulus: return "UnsupportedModulus";
    case Errc::NonInvertibleKeyDraw: return "NonInvertibleKeyDraw";
    case Errc::RecContractViolated: return "RecContractViolated";
    case Errc::GameUndefinedForScheme: return "GameUndefinedForScheme";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// Every failure in the library is reported through this exception; the code
// identifies the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qs2lab
