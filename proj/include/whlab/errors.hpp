#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace whlab {

enum class Errc {
  NonElliptic,
  NonClosing,
  LogBranchFailure,
  InfiniteVariation,
  DivergentTail,
  BracketFailure,
  Unsupported,
  SingularPoint,
  CrossValidationFailure,
  TransversalityFailure,
  PathEllipticityFailure,
  InvalidArgument,
  Schema,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so callers
/// (the CLI in particular) can map them onto exit statuses without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace whlab
