#include "toscadata/type_system.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "toscadata/catalog.hpp"

namespace toscadata {

const RequirementDefinition* ResolvedType::find_requirement(
    const std::string& req) const {
  auto it = std::find_if(requirements.begin(), requirements.end(),
                         [&](const auto& r) { return r.name == req; });
  return it == requirements.end() ? nullptr : &*it;
}

const PropertyDefinition* ResolvedType::find_property(
    const std::string& prop) const {
  auto it = properties.find(prop);
  return it == properties.end() ? nullptr : &it->second;
}

TypeSystem::TypeSystem(std::vector<TypeDefinition> definitions) {
  for (auto& def : definitions) {
    std::string name = def.name;
    definitions_.insert_or_assign(std::move(name), std::move(def));
  }
  resolve_all();
}

TypeSystem::TypeSystem(const TypeCatalog& catalog,
                       const std::vector<TypeDefinition>& user_types) {
  definitions_ = catalog.definitions();
  for (const auto& def : user_types) definitions_.insert_or_assign(def.name, def);
  resolve_all();
}

TypeSystem TypeSystem::for_template(const ServiceTemplate& t) {
  return TypeSystem(builtin_catalog(), t.all_user_types());
}

void TypeSystem::resolve_all() {
  for (const auto& [name, leaf] : definitions_) {
    std::vector<const TypeDefinition*> chain;
    std::set<std::string> seen;
    const TypeDefinition* cur = &leaf;
    try {
      while (true) {
        if (!seen.insert(cur->name).second)
          throw Error(ErrorCode::CyclicDerivation,
                      "derived_from cycle through '" + cur->name + "'",
                      leaf.location);
        chain.push_back(cur);
        if (!cur->derived_from) break;
        auto parent = definitions_.find(*cur->derived_from);
        if (parent == definitions_.end())
          throw Error(ErrorCode::UnknownType,
                      "'" + cur->name + "' derives from unknown type '" +
                          *cur->derived_from + "'",
                      cur->location);
        if (parent->second.kind != cur->kind)
          throw Error(ErrorCode::SchemaError,
                      "'" + cur->name + "' derives from a " +
                          std::string(to_string(parent->second.kind)) + " type",
                      cur->location);
        cur = &parent->second;
      }
    } catch (const Error& e) {
      failures_.emplace(name, e);
      continue;
    }

    ResolvedType r;
    r.name = name;
    r.kind = leaf.kind;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const TypeDefinition& def = **it;
      r.ancestry.push_back(def.name);
      for (const auto& [pname, prop] : def.properties)
        r.properties.insert_or_assign(pname, prop);
      for (const auto& [aname, attr] : def.attributes)
        r.attributes.insert_or_assign(aname, attr);
      for (const auto& [cname, cap] : def.capabilities)
        r.capabilities.insert_or_assign(cname, cap);
      for (const auto& req : def.requirements) {
        auto found = std::find_if(r.requirements.begin(), r.requirements.end(),
                                  [&](const auto& x) { return x.name == req.name; });
        if (found != r.requirements.end())
          *found = req;
        else
          r.requirements.push_back(req);
      }
    }
    std::erase_if(r.properties, [](const auto& kv) {
      return kv.second.status && *kv.second.status == "unsupported";
    });
    resolved_.emplace(name, std::move(r));
  }
}

const TypeDefinition& TypeSystem::definition(const std::string& name) const {
  auto it = definitions_.find(name);
  if (it == definitions_.end())
    throw Error(ErrorCode::UnknownType, "unknown type '" + name + "'");
  return it->second;
}

const ResolvedType& TypeSystem::resolve(const std::string& name) const {
  if (auto it = resolved_.find(name); it != resolved_.end()) return it->second;
  if (auto it = failures_.find(name); it != failures_.end()) throw it->second;
  throw Error(ErrorCode::UnknownType, "unknown type '" + name + "'");
}

bool TypeSystem::is_subtype(const std::string& a, const std::string& b) const {
  const auto& ra = resolve(a);
  resolve(b);
  return std::find(ra.ancestry.begin(), ra.ancestry.end(), b) != ra.ancestry.end();
}

std::vector<std::string> TypeSystem::names() const {
  std::vector<std::string> out;
  out.reserve(definitions_.size());
  for (const auto& [name, _] : definitions_) out.push_back(name);
  return out;
}

ResolvedType resolve_type(const std::string& name, const TypeSystem& types) {
  return types.resolve(name);
}

bool is_subtype(const std::string& a, const std::string& b,
                const TypeSystem& types) {
  return types.is_subtype(a, b);
}

std::optional<Intrinsic> parse_intrinsic_text(const std::string& text) {
  static const std::regex pattern(
      R"(^\s*\{\s*(get_artifact|get_property)\s*:\s*\[\s*([^,\]\s]+)\s*,\s*([^,\]\s]+)\s*\]\s*\}\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  Intrinsic call;
  call.function = m[1] == "get_artifact" ? Intrinsic::Function::get_artifact
                                         : Intrinsic::Function::get_property;
  call.arguments = {m[2].str(), m[3].str()};
  return call;
}

namespace {

constexpr int kMaxIndirection = 16;

Value evaluate(const PropertyExpression& expr, const NodeTemplate& node,
               const ServiceTemplate& t, const TypeSystem& types, int depth);

Value lookup_property(const NodeTemplate& node, const std::string& property,
                      const ServiceTemplate& t, const TypeSystem& types,
                      int depth) {
  if (auto it = node.properties.find(property); it != node.properties.end())
    return evaluate(it->second, node, t, types, depth + 1);
  const auto& resolved = types.resolve(node.type);
  const auto* def = resolved.find_property(property);
  if (!def)
    throw Error(ErrorCode::UnknownProperty,
                "type '" + node.type + "' has no property '" + property + "'",
                node.location);
  if (!def->default_value)
    throw Error(ErrorCode::UnknownProperty,
                "property '" + property + "' of '" + node.name +
                    "' has no value and no default",
                node.location);
  return *def->default_value;
}

Value evaluate_call(const Intrinsic& call, const NodeTemplate& node,
                    const ServiceTemplate& t, const TypeSystem& types,
                    int depth) {
  if (depth > kMaxIndirection)
    throw Error(ErrorCode::UnknownProperty,
                "property indirection too deep at '" + node.name + "'",
                node.location);
  if (call.arguments.size() != 2)
    throw Error(ErrorCode::SchemaError,
                std::string(to_string(call.function)) + " takes two arguments",
                node.location);
  const std::string& who = call.arguments[0];
  const NodeTemplate* target = &node;
  if (who != "SELF") {
    auto it = t.node_templates.find(who);
    if (it == t.node_templates.end())
      throw Error(ErrorCode::UnknownTemplate, "no node template '" + who + "'",
                  node.location);
    target = &it->second;
  }
  const std::string& member = call.arguments[1];
  if (call.function == Intrinsic::Function::get_artifact) {
    auto it = target->artifacts.find(member);
    if (it == target->artifacts.end())
      throw Error(ErrorCode::UnknownArtifact,
                  "'" + target->name + "' declares no artifact '" + member + "'",
                  node.location);
    return it->second.file;
  }
  return lookup_property(*target, member, t, types, depth);
}

Value evaluate(const PropertyExpression& expr, const NodeTemplate& node,
               const ServiceTemplate& t, const TypeSystem& types, int depth) {
  if (const auto* call = std::get_if<Intrinsic>(&expr))
    return evaluate_call(*call, node, t, types, depth);
  const Value& literal = std::get<Value>(expr);
  if (const auto* s = std::get_if<std::string>(&literal)) {
    if (auto call = parse_intrinsic_text(*s))
      return evaluate_call(*call, node, t, types, depth);
  }
  return literal;
}

}  // namespace

Value evaluate_intrinsic(const PropertyExpression& expr, const NodeTemplate& node,
                         const ServiceTemplate& t, const TypeSystem& types) {
  return evaluate(expr, node, t, types, 0);
}

Value property_value(const NodeTemplate& node, const std::string& property,
                     const ServiceTemplate& t, const TypeSystem& types) {
  return lookup_property(node, property, t, types, 0);
}

}  // namespace toscadata
