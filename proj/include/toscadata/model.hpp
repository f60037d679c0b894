#pragma once

// TOSCA object model: type definitions and topology templates.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toscadata/error.hpp"

namespace toscadata {

enum class TypeKind { node, capability, relationship };
enum class ValueType { string, integer, boolean };

std::string_view to_string(TypeKind kind);
std::string_view to_string(ValueType type);

using Value = std::variant<std::string, std::int64_t, bool>;
using Bytes = std::vector<std::uint8_t>;

std::string to_display(const Value& value);
bool conforms(const Value& value, ValueType type);

/// Marker for an open upper bound (`UNBOUNDED`).
struct Unbounded {
  bool operator==(const Unbounded&) const = default;
};

struct Occurrences {
  std::uint32_t min = 1;
  std::variant<std::uint32_t, Unbounded> max = std::uint32_t{1};

  bool unbounded() const { return std::holds_alternative<Unbounded>(max); }
  bool admits(std::size_t count) const;
  bool operator==(const Occurrences&) const = default;
};

struct PropertyDefinition {
  std::string name;
  ValueType value_type = ValueType::string;
  std::optional<Value> default_value;
  bool required = true;
  std::optional<std::string> description;
  // TOSCA `status`; "unsupported" removes the property from a derived type.
  std::optional<std::string> status;

  bool operator==(const PropertyDefinition&) const = default;
};

struct AttributeDefinition {
  std::string name;
  ValueType value_type = ValueType::string;
  std::optional<std::string> description;

  bool operator==(const AttributeDefinition&) const = default;
};

struct RequirementDefinition {
  std::string name;
  std::string capability_type;
  std::string node_type;
  std::string relationship_type;
  Occurrences occurrences;

  bool operator==(const RequirementDefinition&) const = default;
};

struct CapabilityDefinition {
  std::string name;
  std::string capability_type;
  std::vector<std::string> valid_source_types;
  Occurrences occurrences{1, Unbounded{}};
  std::optional<std::string> description;

  bool operator==(const CapabilityDefinition&) const = default;
};

struct TypeDefinition {
  std::string name;
  TypeKind kind = TypeKind::node;
  std::optional<std::string> derived_from;
  std::optional<std::string> description;
  std::map<std::string, std::string> metadata;
  std::map<std::string, PropertyDefinition> properties;
  std::map<std::string, AttributeDefinition> attributes;
  std::vector<RequirementDefinition> requirements;
  std::map<std::string, CapabilityDefinition> capabilities;
  std::optional<SourceLocation> location;

  /// Structural equality; ignores location.
  friend bool operator==(const TypeDefinition& a, const TypeDefinition& b);
};

/// `get_artifact` / `get_property` call kept symbolic until evaluation.
struct Intrinsic {
  enum class Function { get_artifact, get_property };
  Function function = Function::get_property;
  std::vector<std::string> arguments;

  bool operator==(const Intrinsic&) const = default;
};

std::string_view to_string(Intrinsic::Function fn);

using PropertyExpression = std::variant<Value, Intrinsic>;

struct ArtifactDefinition {
  std::string file;
  std::optional<std::string> type;

  bool operator==(const ArtifactDefinition&) const = default;
};

struct RequirementAssignment {
  std::string requirement;
  std::string target;
  std::optional<std::string> relationship;

  bool operator==(const RequirementAssignment&) const = default;
};

struct NodeTemplate {
  std::string name;
  std::string type;
  std::map<std::string, PropertyExpression> properties;
  std::map<std::string, ArtifactDefinition> artifacts;
  std::vector<RequirementAssignment> requirements;
  std::optional<SourceLocation> location;

  friend bool operator==(const NodeTemplate& a, const NodeTemplate& b);
};

struct ServiceTemplate {
  std::string tosca_version = "tosca_simple_yaml_1_3";
  std::optional<std::string> description;
  std::vector<std::string> imports;
  std::vector<TypeDefinition> user_types;
  // Types pulled in through `imports`; not re-emitted on serialization.
  std::vector<TypeDefinition> imported_types;
  std::map<std::string, NodeTemplate> node_templates;

  const NodeTemplate& node(const std::string& name) const;
  NodeTemplate& node(const std::string& name);
  bool has_node(const std::string& name) const {
    return node_templates.contains(name);
  }

  /// user_types followed by imported_types.
  std::vector<TypeDefinition> all_user_types() const;

  bool operator==(const ServiceTemplate&) const = default;
};

}  // namespace toscadata
