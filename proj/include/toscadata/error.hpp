#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace toscadata {

/// 1-based position inside a named input.
struct SourceLocation {
  std::string file;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  bool operator==(const SourceLocation&) const = default;
};

std::ostream& operator<<(std::ostream& os, const SourceLocation& loc);

enum class ErrorCode {
  UnknownType,
  CyclicDerivation,
  UnknownArtifact,
  UnknownProperty,
  UnknownTemplate,
  SyntaxError,
  SchemaError,
  DuplicateTemplateName,
  MissingMetadata,
  MissingEntryDefinitions,
  InvalidArchive,
  HostCycle,
  MissingHost,
  NotAPipeline,
  VerifierNonConvergence,
  DependencyCycle,
  UnsupportedType,
  DuplicateFunction,
  CronSyntax,
  ScheduleSyntax,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceLocation> location = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourceLocation>& location() const noexcept {
    return location_;
  }

 private:
  ErrorCode code_;
  std::optional<SourceLocation> location_;
};

}  // namespace toscadata
