#include "toscadata/model.hpp"

namespace toscadata {

std::string_view to_string(TypeKind kind) {
  switch (kind) {
    case TypeKind::node: return "node";
    case TypeKind::capability: return "capability";
    case TypeKind::relationship: return "relationship";
  }
  return "node";
}

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::string: return "string";
    case ValueType::integer: return "integer";
    case ValueType::boolean: return "boolean";
  }
  return "string";
}

std::string_view to_string(Intrinsic::Function fn) {
  return fn == Intrinsic::Function::get_artifact ? "get_artifact"
                                                 : "get_property";
}

std::string to_display(const Value& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  return std::get<bool>(value) ? "true" : "false";
}

bool conforms(const Value& value, ValueType type) {
  switch (type) {
    case ValueType::string: return std::holds_alternative<std::string>(value);
    case ValueType::integer: return std::holds_alternative<std::int64_t>(value);
    case ValueType::boolean: return std::holds_alternative<bool>(value);
  }
  return false;
}

bool Occurrences::admits(std::size_t count) const {
  if (count < min) return false;
  if (unbounded()) return true;
  return count <= std::get<std::uint32_t>(max);
}

bool operator==(const TypeDefinition& a, const TypeDefinition& b) {
  return a.name == b.name && a.kind == b.kind &&
         a.derived_from == b.derived_from && a.description == b.description &&
         a.metadata == b.metadata && a.properties == b.properties &&
         a.attributes == b.attributes && a.requirements == b.requirements &&
         a.capabilities == b.capabilities;
}

bool operator==(const NodeTemplate& a, const NodeTemplate& b) {
  return a.name == b.name && a.type == b.type && a.properties == b.properties &&
         a.artifacts == b.artifacts && a.requirements == b.requirements;
}

const NodeTemplate& ServiceTemplate::node(const std::string& name) const {
  auto it = node_templates.find(name);
  if (it == node_templates.end())
    throw Error(ErrorCode::UnknownTemplate, "no node template '" + name + "'");
  return it->second;
}

NodeTemplate& ServiceTemplate::node(const std::string& name) {
  auto it = node_templates.find(name);
  if (it == node_templates.end())
    throw Error(ErrorCode::UnknownTemplate, "no node template '" + name + "'");
  return it->second;
}

std::vector<TypeDefinition> ServiceTemplate::all_user_types() const {
  std::vector<TypeDefinition> out = user_types;
  out.insert(out.end(), imported_types.begin(), imported_types.end());
  return out;
}

}  // namespace toscadata
