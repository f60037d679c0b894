#include "toscadata/error.hpp"

namespace toscadata {

std::ostream& operator<<(std::ostream& os, const SourceLocation& loc) {
  if (!loc.file.empty()) os << loc.file << ':';
  return os << loc.line << ':' << loc.column;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::CyclicDerivation: return "CyclicDerivation";
    case ErrorCode::UnknownArtifact: return "UnknownArtifact";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateTemplateName: return "DuplicateTemplateName";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    case ErrorCode::MissingEntryDefinitions: return "MissingEntryDefinitions";
    case ErrorCode::InvalidArchive: return "InvalidArchive";
    case ErrorCode::HostCycle: return "HostCycle";
    case ErrorCode::MissingHost: return "MissingHost";
    case ErrorCode::NotAPipeline: return "NotAPipeline";
    case ErrorCode::VerifierNonConvergence: return "VerifierNonConvergence";
    case ErrorCode::DependencyCycle: return "DependencyCycle";
    case ErrorCode::UnsupportedType: return "UnsupportedType";
    case ErrorCode::DuplicateFunction: return "DuplicateFunction";
    case ErrorCode::CronSyntax: return "CronSyntax";
    case ErrorCode::ScheduleSyntax: return "ScheduleSyntax";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {
std::string decorate(ErrorCode code, const std::string& message,
                     const std::optional<SourceLocation>& location) {
  std::string out(to_string(code));
  out += ": ";
  if (location) {
    if (!location->file.empty()) out += location->file + ":";
    out += std::to_string(location->line) + ":" +
           std::to_string(location->column) + ": ";
  }
  return out + message;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<SourceLocation> location)
    : std::runtime_error(decorate(code, message, location)),
      code_(code),
      location_(std::move(location)) {}

}  // namespace toscadata
