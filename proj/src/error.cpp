#include "vreal/error.hpp"

namespace vreal {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::OutOfOrderEvent: return "OutOfOrderEvent";
    case Errc::WrongSceneEvent: return "WrongSceneEvent";
    case Errc::UnexpectedEvent: return "UnexpectedEvent";
    case Errc::NotAGatedScene: return "NotAGatedScene";
    case Errc::UnknownItem: return "UnknownItem";
    case Errc::DuplicateSpot: return "DuplicateSpot";
    case Errc::IncompleteSession: return "IncompleteSession";
    case Errc::MalformedLog: return "MalformedLog";
    case Errc::MonotonicityViolation: return "MonotonicityViolation";
    case Errc::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::ItemOutOfRange: return "ItemOutOfRange";
    case Errc::WrongItemCount: return "WrongItemCount";
    case Errc::EmptyCohort: return "EmptyCohort";
    case Errc::InvalidDomainMap: return "InvalidDomainMap";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::IntegrationFailure: return "IntegrationFailure";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace vreal
