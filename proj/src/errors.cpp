#include "whlab/errors.hpp"

namespace whlab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonElliptic: return "NonElliptic";
    case Errc::NonClosing: return "NonClosing";
    case Errc::LogBranchFailure: return "LogBranchFailure";
    case Errc::InfiniteVariation: return "InfiniteVariation";
    case Errc::DivergentTail: return "DivergentTail";
    case Errc::BracketFailure: return "BracketFailure";
    case Errc::Unsupported: return "Unsupported";
    case Errc::SingularPoint: return "SingularPoint";
    case Errc::CrossValidationFailure: return "CrossValidationFailure";
    case Errc::TransversalityFailure: return "TransversalityFailure";
    case Errc::PathEllipticityFailure: return "PathEllipticityFailure";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Schema: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace whlab
