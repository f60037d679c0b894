#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toscadata/model.hpp"

namespace toscadata {

class TypeCatalog;

struct ParseWarning {
  std::string message;
  SourceLocation location;
};

struct DefinitionsDocument {
  std::optional<std::string> tosca_version;
  std::vector<std::string> imports;
  std::vector<TypeDefinition> types;  // sorted by (kind, name)
  std::vector<ParseWarning> warnings;
};

/// Returns the contents of an imported file, or nullopt if it is absent.
using ImportResolver =
    std::function<std::optional<std::string>(const std::string& path)>;

struct ParseOptions {
  std::string source_name;
  const TypeCatalog* catalog = nullptr;  // nullptr: built-in catalog
  ImportResolver resolver;               // empty: imports are an error
};

/// Parses a type-definition document (`node_types`, `capability_types`,
/// `relationship_types`). A missing `tosca_definitions_version` is only a
/// warning when at least one type section is present.
DefinitionsDocument parse_definitions(std::string_view text,
                                      const std::string& source_name = {});

/// Parses a bare `requirements:` block as it appears in type listings.
std::vector<RequirementDefinition> parse_requirements_block(
    std::string_view text, const std::string& source_name = {});

/// Parses a full service template and validates it against the catalog
/// plus the template's own and imported types: node types must resolve,
/// assigned properties must exist, requirement targets must exist.
ServiceTemplate parse_service_template(std::string_view text,
                                       const ParseOptions& options = {},
                                       std::vector<ParseWarning>* warnings = nullptr);

/// Parses a map of node templates with no surrounding document, as in
/// blueprint excerpts. Targets of requirement assignments are not checked.
std::map<std::string, NodeTemplate> parse_node_templates(
    std::string_view text, const ParseOptions& options = {},
    std::vector<ParseWarning>* warnings = nullptr);

/// Normal form: 2-space indent, sorted keys and template names, strings
/// double-quoted.
std::string serialize_template(const ServiceTemplate& t);
std::string serialize_definitions(const std::vector<TypeDefinition>& types,
                                  const std::string& tosca_version =
                                      "tosca_simple_yaml_1_3");

/// Loads a template from a YAML file (imports resolved in its directory)
/// or from a CSAR archive (imports resolved inside the archive).
ServiceTemplate load_template(const std::filesystem::path& path,
                              std::vector<ParseWarning>* warnings = nullptr);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace toscadata
