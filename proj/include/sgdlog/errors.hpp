#pragma once

#include <stdexcept>
#include <string>

namespace sgdlog {

// Base for all structured errors. `code()` is the stable machine-readable
// name emitted by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define SGDLOG_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& msg) : Error(#Name, msg) {} \
  }

SGDLOG_DEFINE_ERROR(MalformedSpec);
SGDLOG_DEFINE_ERROR(ModeUnavailable);
SGDLOG_DEFINE_ERROR(InsufficientSamples);
SGDLOG_DEFINE_ERROR(SubroutineFailure);
SGDLOG_DEFINE_ERROR(InconsistentRho);
SGDLOG_DEFINE_ERROR(NotAPower);
SGDLOG_DEFINE_ERROR(NotInGroup);
SGDLOG_DEFINE_ERROR(NoSolution);
SGDLOG_DEFINE_ERROR(NotMember);
SGDLOG_DEFINE_ERROR(TokenBudgetExhausted);
SGDLOG_DEFINE_ERROR(CapExceeded);

#undef SGDLOG_DEFINE_ERROR

}  // namespace sgdlog
