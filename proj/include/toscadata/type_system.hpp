#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toscadata/model.hpp"

namespace toscadata {

class TypeCatalog;

/// A type with its `derived_from` chain flattened. The most-derived
/// declaration of a member replaces inherited ones wholesale; properties
/// whose winning declaration has status "unsupported" are dropped.
struct ResolvedType {
  std::string name;
  TypeKind kind = TypeKind::node;
  std::vector<std::string> ancestry;  // root first, `name` last
  std::map<std::string, PropertyDefinition> properties;
  std::map<std::string, AttributeDefinition> attributes;
  std::vector<RequirementDefinition> requirements;
  std::map<std::string, CapabilityDefinition> capabilities;

  const RequirementDefinition* find_requirement(const std::string& req) const;
  const PropertyDefinition* find_property(const std::string& prop) const;
  bool operator==(const ResolvedType&) const = default;
};

/// Immutable view over a catalog plus user-supplied definitions. Every
/// name is resolved once at construction; failures are replayed by
/// resolve() so one broken chain does not poison unrelated names.
class TypeSystem {
 public:
  explicit TypeSystem(std::vector<TypeDefinition> definitions);
  TypeSystem(const TypeCatalog& catalog,
             const std::vector<TypeDefinition>& user_types);

  /// Built-in catalog plus the template's own and imported types.
  static TypeSystem for_template(const ServiceTemplate& t);

  bool contains(const std::string& name) const {
    return definitions_.contains(name);
  }
  const TypeDefinition& definition(const std::string& name) const;
  const ResolvedType& resolve(const std::string& name) const;
  bool is_subtype(const std::string& a, const std::string& b) const;
  std::vector<std::string> names() const;

 private:
  void resolve_all();

  std::map<std::string, TypeDefinition> definitions_;
  std::map<std::string, ResolvedType> resolved_;
  std::map<std::string, Error> failures_;
};

/// Free-function forms of the type-system operations.
ResolvedType resolve_type(const std::string& name, const TypeSystem& types);
bool is_subtype(const std::string& a, const std::string& b,
                const TypeSystem& types);

/// Evaluates a property expression of `node` inside `t`. Literals are
/// returned unchanged; strings that spell an intrinsic call in flow syntax
/// (`"{ get_artifact: [SELF, x] }"`) are evaluated as that call.
Value evaluate_intrinsic(const PropertyExpression& expr, const NodeTemplate& node,
                         const ServiceTemplate& t, const TypeSystem& types);

/// Effective value of `property` on `node`: assignment, else type default.
Value property_value(const NodeTemplate& node, const std::string& property,
                     const ServiceTemplate& t, const TypeSystem& types);

std::optional<Intrinsic> parse_intrinsic_text(const std::string& text);

}  // namespace toscadata
