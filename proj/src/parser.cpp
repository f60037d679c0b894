#include "toscadata/parser.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "toscadata/catalog.hpp"
#include "toscadata/csar.hpp"
#include "toscadata/type_system.hpp"

namespace toscadata {

namespace {

std::uint32_t count_lines(std::string_view text) {
  auto n = static_cast<std::uint32_t>(std::count(text.begin(), text.end(), '\n'));
  if (!text.empty() && text.back() != '\n') ++n;
  return std::max<std::uint32_t>(n, 1);
}

/// Shared state for one document: location mapping and warning sink.
class Reader {
 public:
  Reader(std::string_view text, std::string source,
         std::vector<ParseWarning>* warnings)
      : text_(text), source_(std::move(source)), lines_(count_lines(text)),
        warnings_(warnings) {}

  YAML::Node load() const {
    try {
      return YAML::Load(std::string(text_));
    } catch (const YAML::Exception& e) {
      throw Error(ErrorCode::SyntaxError, e.msg, at(e.mark));
    }
  }

  SourceLocation at(const YAML::Mark& mark) const {
    SourceLocation loc{source_, 1, 1};
    if (mark.line >= 0) loc.line = static_cast<std::uint32_t>(mark.line) + 1;
    if (mark.column >= 0) loc.column = static_cast<std::uint32_t>(mark.column) + 1;
    loc.line = std::clamp<std::uint32_t>(loc.line, 1, lines_);
    return loc;
  }
  SourceLocation at(const YAML::Node& node) const { return at(node.Mark()); }
  SourceLocation start() const { return SourceLocation{source_, 1, 1}; }

  [[noreturn]] void fail(ErrorCode code, const std::string& message,
                         const YAML::Node& node) const {
    throw Error(code, message, at(node));
  }
  [[noreturn]] void fail(const std::string& message, const YAML::Node& node) const {
    fail(ErrorCode::SchemaError, message, node);
  }

  void warn(const std::string& message, const YAML::Node& node) const {
    if (warnings_) warnings_->push_back({message, at(node)});
  }
  void warn(const std::string& message, const SourceLocation& loc) const {
    if (warnings_) warnings_->push_back({message, loc});
  }

  const std::string& source() const { return source_; }

  std::string scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(what + " must be a scalar", node);
    return node.Scalar();
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(what + " must be a mapping", node);
  }

  /// Iterates a mapping, rejecting duplicate keys.
  template <typename Fn>
  void each_entry(const YAML::Node& map, const std::string& what, Fn&& fn,
                  ErrorCode duplicate = ErrorCode::SchemaError) const {
    if (map.IsNull()) return;
    require_map(map, what);
    std::set<std::string> seen;
    for (auto it = map.begin(); it != map.end(); ++it) {
      std::string key = scalar(it->first, what + " key");
      if (!seen.insert(key).second)
        fail(duplicate, "duplicate key '" + key + "' in " + what, it->first);
      fn(key, it->first, it->second);
    }
  }

  /// Iterates a sequence of single-key mappings (TOSCA requirement lists).
  template <typename Fn>
  void each_single_entry(const YAML::Node& seq, const std::string& what,
                         Fn&& fn) const {
    if (seq.IsNull()) return;
    if (!seq.IsSequence()) fail(what + " must be a sequence", seq);
    for (const auto& item : seq) {
      if (!item.IsMap() || item.size() != 1)
        fail("each entry of " + what + " must be a single-key mapping", item);
      auto it = item.begin();
      fn(scalar(it->first, what + " key"), it->first, it->second);
    }
  }

 private:
  std::string_view text_;
  std::string source_;
  std::uint32_t lines_;
  std::vector<ParseWarning>* warnings_;
};

std::optional<std::int64_t> as_integer(const std::string& s) {
  static const std::regex pattern(R"(^[-+]?[0-9]+$)");
  if (!std::regex_match(s, pattern)) return std::nullopt;
  try {
    return std::stoll(s);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

std::optional<bool> as_boolean(const std::string& s) {
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  return std::nullopt;
}

ValueType parse_value_type(const Reader& r, const YAML::Node& node) {
  std::string name = r.scalar(node, "property type");
  if (name == "string") return ValueType::string;
  if (name == "integer") return ValueType::integer;
  if (name == "boolean") return ValueType::boolean;
  r.fail("unsupported property type '" + name +
             "' (expected string, integer or boolean)",
         node);
}

Value coerce_scalar(const Reader& r, const YAML::Node& node, ValueType type,
                    const std::string& what) {
  std::string text = r.scalar(node, what);
  switch (type) {
    case ValueType::string:
      return text;
    case ValueType::integer:
      if (auto v = as_integer(text)) return *v;
      r.fail(what + " must be an integer, got '" + text + "'", node);
    case ValueType::boolean:
      if (auto v = as_boolean(text)) return *v;
      r.fail(what + " must be a boolean, got '" + text + "'", node);
  }
  r.fail(what + " has an unknown value type", node);
}

Occurrences parse_occurrences(const Reader& r, const YAML::Node& node,
                              bool requirement) {
  if (!node.IsSequence() || node.size() != 2)
    r.fail("occurrences must be a two-element sequence [min, max]", node);
  auto min = as_integer(r.scalar(node[0], "occurrences minimum"));
  if (!min || *min < 0) r.fail("occurrences minimum must be a non-negative integer", node[0]);
  Occurrences occ;
  occ.min = static_cast<std::uint32_t>(*min);
  std::string max_text = r.scalar(node[1], "occurrences maximum");
  if (max_text == "UNBOUNDED") {
    occ.max = Unbounded{};
  } else {
    auto max = as_integer(max_text);
    if (!max || *max < 0)
      r.fail("occurrences maximum must be an integer or UNBOUNDED", node[1]);
    if (requirement && *max < 1)
      r.fail("requirement occurrences maximum must be at least 1", node[1]);
    if (*max < *min) r.fail("occurrences minimum exceeds maximum", node);
    occ.max = static_cast<std::uint32_t>(*max);
  }
  return occ;
}

std::vector<std::string> parse_name_list(const Reader& r, const YAML::Node& node,
                                         const std::string& what) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    out.push_back(node.Scalar());
    return out;
  }
  if (!node.IsSequence()) r.fail(what + " must be a sequence", node);
  for (const auto& item : node) out.push_back(r.scalar(item, what + " entry"));
  return out;
}

PropertyDefinition parse_property_definition(const Reader& r,
                                             const std::string& name,
                                             const YAML::Node& body) {
  r.require_map(body, "property '" + name + "'");
  PropertyDefinition def;
  def.name = name;
  std::optional<YAML::Node> default_node;
  bool have_type = false;
  r.each_entry(body, "property '" + name + "'",
               [&](const std::string& key, const YAML::Node& k, const YAML::Node& v) {
                 if (key == "type") {
                   def.value_type = parse_value_type(r, v);
                   have_type = true;
                 } else if (key == "description") {
                   def.description = r.scalar(v, "description");
                 } else if (key == "required") {
                   auto b = as_boolean(r.scalar(v, "required"));
                   if (!b) r.fail("required must be a boolean", v);
                   def.required = *b;
                 } else if (key == "default") {
                   default_node.emplace(v);
                 } else if (key == "status") {
                   def.status = r.scalar(v, "status");
                 } else {
                   r.warn("ignoring property keyname '" + key + "'", k);
                 }
               });
  if (!have_type) r.fail("property '" + name + "' has no type", body);
  if (default_node)
    def.default_value = coerce_scalar(r, *default_node, def.value_type,
                                      "default of '" + name + "'");
  return def;
}

AttributeDefinition parse_attribute_definition(const Reader& r,
                                               const std::string& name,
                                               const YAML::Node& body) {
  AttributeDefinition def;
  def.name = name;
  bool have_type = false;
  r.each_entry(body, "attribute '" + name + "'",
               [&](const std::string& key, const YAML::Node& k, const YAML::Node& v) {
                 if (key == "type") {
                   def.value_type = parse_value_type(r, v);
                   have_type = true;
                 } else if (key == "description") {
                   def.description = r.scalar(v, "description");
                 } else {
                   r.warn("ignoring attribute keyname '" + key + "'", k);
                 }
               });
  if (!have_type) r.fail("attribute '" + name + "' has no type", body);
  return def;
}

RequirementDefinition parse_requirement_definition(const Reader& r,
                                                   const std::string& name,
                                                   const YAML::Node& body) {
  RequirementDefinition def;
  def.name = name;
  if (body.IsScalar()) {
    r.fail("requirement '" + name + "' must give capability, node and relationship",
           body);
  }
  r.each_entry(body, "requirement '" + name + "'",
               [&](const std::string& key, const YAML::Node& k, const YAML::Node& v) {
                 if (key == "capability")
                   def.capability_type = r.scalar(v, "capability");
                 else if (key == "node")
                   def.node_type = r.scalar(v, "node");
                 else if (key == "relationship")
                   def.relationship_type = r.scalar(v, "relationship");
                 else if (key == "occurrences")
                   def.occurrences = parse_occurrences(r, v, true);
                 else
                   r.warn("ignoring requirement keyname '" + key + "'", k);
               });
  if (def.capability_type.empty())
    r.fail("requirement '" + name + "' has no capability", body);
  if (def.node_type.empty()) r.fail("requirement '" + name + "' has no node", body);
  if (def.relationship_type.empty())
    r.fail("requirement '" + name + "' has no relationship", body);
  return def;
}

CapabilityDefinition parse_capability_definition(const Reader& r,
                                                 const std::string& name,
                                                 const YAML::Node& body) {
  CapabilityDefinition def;
  def.name = name;
  if (body.IsScalar()) {
    def.capability_type = body.Scalar();
    return def;
  }
  r.each_entry(body, "capability '" + name + "'",
               [&](const std::string& key, const YAML::Node& k, const YAML::Node& v) {
                 if (key == "type")
                   def.capability_type = r.scalar(v, "capability type");
                 else if (key == "valid_source_types")
                   def.valid_source_types = parse_name_list(r, v, "valid_source_types");
                 else if (key == "occurrences")
                   def.occurrences = parse_occurrences(r, v, false);
                 else if (key == "description")
                   def.description = r.scalar(v, "description");
                 else
                   r.warn("ignoring capability keyname '" + key + "'", k);
               });
  if (def.capability_type.empty())
    r.fail("capability '" + name + "' has no type", body);
  return def;
}

std::vector<RequirementDefinition> parse_requirement_list(const Reader& r,
                                                          const YAML::Node& seq) {
  std::vector<RequirementDefinition> out;
  std::set<std::string> seen;
  r.each_single_entry(seq, "requirements",
                      [&](const std::string& name, const YAML::Node& k,
                          const YAML::Node& v) {
                        if (!seen.insert(name).second)
                          r.fail("duplicate requirement '" + name + "'", k);
                        out.push_back(parse_requirement_definition(r, name, v));
                      });
  return out;
}

TypeDefinition parse_type_definition(const Reader& r, TypeKind kind,
                                     const std::string& name,
                                     const YAML::Node& key_node,
                                     const YAML::Node& body) {
  TypeDefinition def;
  def.name = name;
  def.kind = kind;
  def.location = r.at(key_node);
  if (body.IsNull()) return def;
  r.each_entry(body, "type '" + name + "'", [&](const std::string& key,
                                                const YAML::Node& k,
                                                const YAML::Node& v) {
    if (key == "derived_from") {
      def.derived_from = r.scalar(v, "derived_from");
    } else if (key == "description") {
      def.description = r.scalar(v, "description");
    } else if (key == "metadata") {
      r.each_entry(v, "metadata", [&](const std::string& mk, const YAML::Node&,
                                      const YAML::Node& mv) {
        def.metadata.emplace(mk, r.scalar(mv, "metadata value"));
      });
    } else if (key == "properties") {
      r.each_entry(v, "properties", [&](const std::string& pk, const YAML::Node&,
                                        const YAML::Node& pv) {
        def.properties.emplace(pk, parse_property_definition(r, pk, pv));
      });
    } else if (key == "attributes") {
      r.each_entry(v, "attributes", [&](const std::string& ak, const YAML::Node&,
                                        const YAML::Node& av) {
        def.attributes.emplace(ak, parse_attribute_definition(r, ak, av));
      });
    } else if (key == "requirements" && kind == TypeKind::node) {
      def.requirements = parse_requirement_list(r, v);
    } else if (key == "capabilities" && kind == TypeKind::node) {
      r.each_entry(v, "capabilities", [&](const std::string& ck, const YAML::Node&,
                                          const YAML::Node& cv) {
        def.capabilities.emplace(ck, parse_capability_definition(r, ck, cv));
      });
    } else {
      r.warn("ignoring keyname '" + key + "' of type '" + name + "'", k);
    }
  });
  return def;
}

void sort_types(std::vector<TypeDefinition>& types) {
  std::stable_sort(types.begin(), types.end(), [](const auto& a, const auto& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.name < b.name;
  });
}

constexpr std::pair<const char*, TypeKind> kTypeSections[] = {
    {"node_types", TypeKind::node},
    {"capability_types", TypeKind::capability},
    {"relationship_types", TypeKind::relationship},
};

std::optional<TypeKind> section_kind(const std::string& key) {
  for (const auto& [name, kind] : kTypeSections)
    if (key == name) return kind;
  return std::nullopt;
}

std::vector<std::string> parse_imports(const Reader& r, const YAML::Node& node) {
  std::vector<std::string> out;
  if (node.IsNull()) return out;
  if (!node.IsSequence()) r.fail("imports must be a sequence", node);
  for (const auto& item : node) {
    if (item.IsScalar()) {
      out.push_back(item.Scalar());
    } else if (item.IsMap() && item["file"]) {
      out.push_back(r.scalar(item["file"], "import file"));
    } else {
      r.fail("import entries must be file names", item);
    }
  }
  return out;
}

void parse_type_section(const Reader& r, TypeKind kind, const YAML::Node& body,
                        std::vector<TypeDefinition>& out) {
  r.each_entry(body, "type section", [&](const std::string& name,
                                         const YAML::Node& k, const YAML::Node& v) {
    out.push_back(parse_type_definition(r, kind, name, k, v));
  });
}

// ---------------------------------------------------------------------------
// Node templates

PropertyExpression parse_property_value(const Reader& r, const YAML::Node& node,
                                        const PropertyDefinition* def,
                                        const std::string& what) {
  if (node.IsMap()) {
    if (node.size() == 1) {
      auto it = node.begin();
      std::string fn = r.scalar(it->first, "function name");
      if (fn == "get_artifact" || fn == "get_property") {
        Intrinsic call;
        call.function = fn == "get_artifact" ? Intrinsic::Function::get_artifact
                                             : Intrinsic::Function::get_property;
        call.arguments = parse_name_list(r, it->second, fn + " arguments");
        if (call.arguments.size() != 2)
          r.fail(fn + " takes exactly two arguments", it->second);
        return call;
      }
      r.fail("unsupported function '" + fn + "' in " + what, it->first);
    }
    r.fail(what + " must be a scalar or a get_artifact/get_property call", node);
  }
  ValueType type = def ? def->value_type : ValueType::string;
  return coerce_scalar(r, node, type, what);
}

NodeTemplate parse_node_template(const Reader& r, const std::string& name,
                                 const YAML::Node& key_node, const YAML::Node& body,
                                 const TypeSystem& types) {
  NodeTemplate node;
  node.name = name;
  node.location = r.at(key_node);
  r.require_map(body, "node template '" + name + "'");
  YAML::Node type_node = body["type"];
  if (!type_node) r.fail("node template '" + name + "' has no type", body);
  node.type = r.scalar(type_node, "type");
  if (!types.contains(node.type))
    r.fail(ErrorCode::UnknownType, "unknown node type '" + node.type + "'", type_node);
  const TypeDefinition& tdef = types.definition(node.type);
  if (tdef.kind != TypeKind::node)
    r.fail("'" + node.type + "' is not a node type", type_node);
  const ResolvedType& resolved = types.resolve(node.type);

  r.each_entry(body, "node template '" + name + "'", [&](const std::string& key,
                                                         const YAML::Node& k,
                                                         const YAML::Node& v) {
    if (key == "type") return;
    if (key == "properties") {
      r.each_entry(v, "properties of '" + name + "'", [&](const std::string& pk,
                                                         const YAML::Node& pkn,
                                                         const YAML::Node& pv) {
        const auto* def = resolved.find_property(pk);
        if (!def)
          r.fail(ErrorCode::UnknownProperty,
                 "type '" + node.type + "' has no property '" + pk + "'", pkn);
        node.properties.emplace(
            pk, parse_property_value(r, pv, def, "property '" + pk + "'"));
      });
    } else if (key == "artifacts") {
      r.each_entry(v, "artifacts of '" + name + "'", [&](const std::string& ak,
                                                        const YAML::Node&,
                                                        const YAML::Node& av) {
        ArtifactDefinition art;
        if (av.IsScalar()) {
          art.file = av.Scalar();
        } else {
          r.require_map(av, "artifact '" + ak + "'");
          if (!av["file"]) r.fail("artifact '" + ak + "' has no file", av);
          art.file = r.scalar(av["file"], "artifact file");
          if (av["type"]) art.type = r.scalar(av["type"], "artifact type");
        }
        node.artifacts.emplace(ak, std::move(art));
      });
    } else if (key == "requirements") {
      r.each_single_entry(v, "requirements of '" + name + "'",
                          [&](const std::string& rk, const YAML::Node&,
                              const YAML::Node& rv) {
                            RequirementAssignment ra;
                            ra.requirement = rk;
                            if (rv.IsScalar()) {
                              ra.target = rv.Scalar();
                            } else {
                              r.require_map(rv, "requirement '" + rk + "'");
                              if (!rv["node"])
                                r.fail("requirement '" + rk + "' names no node", rv);
                              ra.target = r.scalar(rv["node"], "node");
                              if (YAML::Node rel = rv["relationship"]) {
                                if (rel.IsMap() && rel["type"])
                                  ra.relationship = r.scalar(rel["type"], "relationship type");
                                else
                                  ra.relationship = r.scalar(rel, "relationship");
                              }
                            }
                            node.requirements.push_back(std::move(ra));
                          });
    } else {
      r.warn("ignoring keyname '" + key + "' of node template '" + name + "'", k);
    }
  });

  for (const auto& [pname, def] : resolved.properties) {
    if (def.required && !def.default_value && !node.properties.contains(pname))
      r.warn("node template '" + name + "' leaves required property '" + pname +
                 "' unassigned",
             key_node);
  }
  return node;
}

TypeSystem make_types(const ParseOptions& options,
                      const std::vector<TypeDefinition>& extra) {
  const TypeCatalog& catalog = options.catalog ? *options.catalog : builtin_catalog();
  return TypeSystem(catalog, extra);
}

std::map<std::string, NodeTemplate> parse_templates_map(const Reader& r,
                                                        const YAML::Node& map,
                                                        const TypeSystem& types) {
  std::map<std::string, NodeTemplate> out;
  r.each_entry(
      map, "node_templates",
      [&](const std::string& name, const YAML::Node& k, const YAML::Node& v) {
        out.emplace(name, parse_node_template(r, name, k, v, types));
      },
      ErrorCode::DuplicateTemplateName);
  return out;
}

}  // namespace

DefinitionsDocument parse_definitions(std::string_view text,
                                      const std::string& source_name) {
  DefinitionsDocument doc;
  Reader r(text, source_name, &doc.warnings);
  YAML::Node root = r.load();
  if (root.IsNull() || !root.IsDefined())
    throw Error(ErrorCode::SchemaError,
                "empty document: missing tosca_definitions_version", r.start());
  r.require_map(root, "document");
  bool any_section = false;
  r.each_entry(root, "document", [&](const std::string& key, const YAML::Node& k,
                                     const YAML::Node& v) {
    if (key == "tosca_definitions_version") {
      doc.tosca_version = r.scalar(v, key);
    } else if (key == "imports") {
      doc.imports = parse_imports(r, v);
    } else if (auto kind = section_kind(key)) {
      any_section = true;
      parse_type_section(r, *kind, v, doc.types);
    } else if (key == "description" || key == "metadata") {
      // Document-level annotations carry no type information.
    } else {
      r.warn("ignoring top-level key '" + key + "'", k);
    }
  });
  if (!doc.tosca_version) {
    if (!any_section)
      throw Error(ErrorCode::SchemaError, "missing tosca_definitions_version",
                  r.at(root));
    r.warn("missing tosca_definitions_version", r.at(root));
  }
  sort_types(doc.types);
  return doc;
}

std::vector<RequirementDefinition> parse_requirements_block(
    std::string_view text, const std::string& source_name) {
  Reader r(text, source_name, nullptr);
  YAML::Node root = r.load();
  if (!root.IsMap() || !root["requirements"])
    throw Error(ErrorCode::SchemaError, "expected a requirements: block", r.start());
  return parse_requirement_list(r, root["requirements"]);
}

ServiceTemplate parse_service_template(std::string_view text,
                                       const ParseOptions& options,
                                       std::vector<ParseWarning>* warnings) {
  Reader r(text, options.source_name, warnings);
  YAML::Node root = r.load();
  if (root.IsNull() || !root.IsDefined())
    throw Error(ErrorCode::SchemaError,
                "empty document: missing tosca_definitions_version", r.start());
  r.require_map(root, "document");

  ServiceTemplate t;
  std::optional<YAML::Node> topology;
  bool have_version = false;
  r.each_entry(root, "document", [&](const std::string& key, const YAML::Node& k,
                                     const YAML::Node& v) {
    if (key == "tosca_definitions_version") {
      t.tosca_version = r.scalar(v, key);
      have_version = true;
    } else if (key == "description") {
      t.description = r.scalar(v, key);
    } else if (key == "imports") {
      t.imports = parse_imports(r, v);
    } else if (auto kind = section_kind(key)) {
      parse_type_section(r, *kind, v, t.user_types);
    } else if (key == "topology_template") {
      topology.emplace(v);
    } else if (key == "metadata") {
    } else {
      r.warn("ignoring top-level key '" + key + "'", k);
    }
  });
  if (!have_version)
    throw Error(ErrorCode::SchemaError, "missing tosca_definitions_version", r.at(root));
  if (!topology)
    throw Error(ErrorCode::SchemaError, "missing topology_template", r.at(root));
  r.require_map(*topology, "topology_template");
  YAML::Node templates = (*topology)["node_templates"];
  if (!templates)
    throw Error(ErrorCode::SchemaError, "missing topology_template.node_templates",
                r.at(*topology));
  sort_types(t.user_types);

  for (const auto& path : t.imports) {
    std::optional<std::string> body;
    if (options.resolver) body = options.resolver(path);
    if (!body)
      throw Error(ErrorCode::SchemaError, "cannot resolve import '" + path + "'",
                  r.at(root["imports"]));
    DefinitionsDocument doc = parse_definitions(*body, path);
    if (warnings)
      warnings->insert(warnings->end(), doc.warnings.begin(), doc.warnings.end());
    t.imported_types.insert(t.imported_types.end(), doc.types.begin(), doc.types.end());
  }

  TypeSystem types = make_types(options, t.all_user_types());
  for (const auto& def : t.all_user_types()) types.resolve(def.name);

  t.node_templates = parse_templates_map(r, templates, types);
  for (const auto& [name, node] : t.node_templates) {
    for (const auto& ra : node.requirements) {
      if (!t.node_templates.contains(ra.target))
        throw Error(ErrorCode::UnknownTemplate,
                    "requirement '" + ra.requirement + "' of '" + name +
                        "' targets unknown template '" + ra.target + "'",
                    node.location);
    }
  }
  return t;
}

std::map<std::string, NodeTemplate> parse_node_templates(
    std::string_view text, const ParseOptions& options,
    std::vector<ParseWarning>* warnings) {
  Reader r(text, options.source_name, warnings);
  YAML::Node root = r.load();
  if (root.IsNull() || !root.IsDefined())
    throw Error(ErrorCode::SchemaError, "empty node template fragment", r.start());
  TypeSystem types = make_types(options, {});
  return parse_templates_map(r, root, types);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

bool plain_safe(const std::string& s) {
  static const std::regex pattern(R"(^[A-Za-z_][A-Za-z0-9_.\-/]*$)");
  static const std::set<std::string> reserved = {
      "true", "false", "True", "False", "TRUE", "FALSE", "null", "Null",
      "NULL", "yes", "no", "Yes", "No", "on", "off", "On", "Off", "y", "n"};
  return std::regex_match(s, pattern) && !reserved.contains(s);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          static const char* hex = "0123456789abcdef";
          out += "\\x";
          out += hex[c >> 4];
          out += hex[c & 0xf];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

std::string ident(const std::string& s) { return plain_safe(s) ? s : quoted(s); }

std::string value_text(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return quoted(*s);
  return to_display(v);
}

std::string expression_text(const PropertyExpression& e) {
  if (const auto* call = std::get_if<Intrinsic>(&e)) {
    std::string out = "{ ";
    out += to_string(call->function);
    out += ": [ ";
    for (std::size_t i = 0; i < call->arguments.size(); ++i) {
      if (i) out += ", ";
      out += ident(call->arguments[i]);
    }
    return out + " ] }";
  }
  return value_text(std::get<Value>(e));
}

std::string occurrences_text(const Occurrences& occ) {
  std::string max = occ.unbounded() ? "UNBOUNDED"
                                    : std::to_string(std::get<std::uint32_t>(occ.max));
  return "[ " + std::to_string(occ.min) + ", " + max + " ]";
}

void emit_type(std::ostream& os, const TypeDefinition& def) {
  const std::string pad = "    ";
  os << "  " << ident(def.name) << ":";
  bool empty = !def.derived_from && !def.description && def.metadata.empty() &&
               def.properties.empty() && def.attributes.empty() &&
               def.requirements.empty() && def.capabilities.empty();
  if (empty) {
    os << " {}\n";
    return;
  }
  os << "\n";
  if (def.derived_from) os << pad << "derived_from: " << ident(*def.derived_from) << "\n";
  if (def.description) os << pad << "description: " << quoted(*def.description) << "\n";
  if (!def.metadata.empty()) {
    os << pad << "metadata:\n";
    for (const auto& [k, v] : def.metadata)
      os << pad << "  " << ident(k) << ": " << quoted(v) << "\n";
  }
  if (!def.attributes.empty()) {
    os << pad << "attributes:\n";
    for (const auto& [name, attr] : def.attributes) {
      os << pad << "  " << ident(name) << ":\n";
      os << pad << "    type: " << to_string(attr.value_type) << "\n";
      if (attr.description)
        os << pad << "    description: " << quoted(*attr.description) << "\n";
    }
  }
  if (!def.properties.empty()) {
    os << pad << "properties:\n";
    for (const auto& [name, prop] : def.properties) {
      os << pad << "  " << ident(name) << ":\n";
      os << pad << "    type: " << to_string(prop.value_type) << "\n";
      if (prop.description)
        os << pad << "    description: " << quoted(*prop.description) << "\n";
      if (!prop.required) os << pad << "    required: false\n";
      if (prop.default_value)
        os << pad << "    default: " << value_text(*prop.default_value) << "\n";
      if (prop.status) os << pad << "    status: " << ident(*prop.status) << "\n";
    }
  }
  if (!def.requirements.empty()) {
    os << pad << "requirements:\n";
    for (const auto& req : def.requirements) {
      os << pad << "  - " << ident(req.name) << ":\n";
      os << pad << "      capability: " << ident(req.capability_type) << "\n";
      os << pad << "      node: " << ident(req.node_type) << "\n";
      os << pad << "      relationship: " << ident(req.relationship_type) << "\n";
      os << pad << "      occurrences: " << occurrences_text(req.occurrences) << "\n";
    }
  }
  if (!def.capabilities.empty()) {
    os << pad << "capabilities:\n";
    for (const auto& [name, cap] : def.capabilities) {
      os << pad << "  " << ident(name) << ":\n";
      os << pad << "    type: " << ident(cap.capability_type) << "\n";
      if (cap.description)
        os << pad << "    description: " << quoted(*cap.description) << "\n";
      if (!cap.valid_source_types.empty()) {
        os << pad << "    valid_source_types: [ ";
        for (std::size_t i = 0; i < cap.valid_source_types.size(); ++i) {
          if (i) os << ", ";
          os << ident(cap.valid_source_types[i]);
        }
        os << " ]\n";
      }
      os << pad << "    occurrences: " << occurrences_text(cap.occurrences) << "\n";
    }
  }
}

void emit_type_sections(std::ostream& os, std::vector<TypeDefinition> types) {
  sort_types(types);
  for (const auto& [section, kind] : kTypeSections) {
    bool opened = false;
    for (const auto& def : types) {
      if (def.kind != kind) continue;
      if (!opened) {
        os << section << ":\n";
        opened = true;
      }
      emit_type(os, def);
    }
  }
}

void emit_node(std::ostream& os, const NodeTemplate& node) {
  const std::string pad = "      ";
  os << "    " << ident(node.name) << ":\n";
  os << pad << "type: " << ident(node.type) << "\n";
  if (!node.properties.empty()) {
    os << pad << "properties:\n";
    for (const auto& [name, expr] : node.properties)
      os << pad << "  " << ident(name) << ": " << expression_text(expr) << "\n";
  }
  if (!node.artifacts.empty()) {
    os << pad << "artifacts:\n";
    for (const auto& [name, art] : node.artifacts) {
      if (!art.type) {
        os << pad << "  " << ident(name) << ": " << quoted(art.file) << "\n";
      } else {
        os << pad << "  " << ident(name) << ":\n";
        os << pad << "    file: " << quoted(art.file) << "\n";
        os << pad << "    type: " << ident(*art.type) << "\n";
      }
    }
  }
  if (!node.requirements.empty()) {
    os << pad << "requirements:\n";
    for (const auto& ra : node.requirements) {
      if (!ra.relationship) {
        os << pad << "  - " << ident(ra.requirement) << ": " << ident(ra.target) << "\n";
      } else {
        os << pad << "  - " << ident(ra.requirement) << ":\n";
        os << pad << "      node: " << ident(ra.target) << "\n";
        os << pad << "      relationship: " << ident(*ra.relationship) << "\n";
      }
    }
  }
}

}  // namespace

std::string serialize_definitions(const std::vector<TypeDefinition>& types,
                                  const std::string& tosca_version) {
  std::ostringstream os;
  os << "tosca_definitions_version: " << ident(tosca_version) << "\n";
  emit_type_sections(os, types);
  return os.str();
}

std::string serialize_template(const ServiceTemplate& t) {
  std::ostringstream os;
  os << "tosca_definitions_version: " << ident(t.tosca_version) << "\n";
  if (t.description) os << "description: " << quoted(*t.description) << "\n";
  if (!t.imports.empty()) {
    os << "imports:\n";
    for (const auto& path : t.imports) os << "  - " << quoted(path) << "\n";
  }
  emit_type_sections(os, t.user_types);
  os << "topology_template:\n";
  if (t.node_templates.empty()) {
    os << "  node_templates: {}\n";
    return os.str();
  }
  os << "  node_templates:\n";
  for (const auto& [_, node] : t.node_templates) emit_node(os, node);
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ServiceTemplate load_template(const std::filesystem::path& path,
                              std::vector<ParseWarning>* warnings) {
  std::string raw = read_text_file(path);
  if (looks_like_zip(raw)) {
    CsarArchive archive =
        unpack_csar(Bytes(raw.begin(), raw.end()));
    const std::filesystem::path entry_dir =
        std::filesystem::path(archive.entry_definitions).parent_path();
    ParseOptions options;
    options.source_name = path.string() + "!" + archive.entry_definitions;
    options.resolver = [&archive, entry_dir](const std::string& import)
        -> std::optional<std::string> {
      std::string key = (entry_dir / import).lexically_normal().generic_string();
      auto it = archive.files.find(key);
      if (it == archive.files.end()) return std::nullopt;
      return std::string(it->second.begin(), it->second.end());
    };
    const Bytes& entry = archive.files.at(archive.entry_definitions);
    return parse_service_template(std::string(entry.begin(), entry.end()), options,
                                  warnings);
  }
  ParseOptions options;
  options.source_name = path.string();
  const std::filesystem::path dir = path.parent_path();
  options.resolver = [dir](const std::string& import) -> std::optional<std::string> {
    std::filesystem::path p = dir / import;
    if (std::filesystem::path(import).is_absolute() ||
        p.lexically_normal().generic_string().find("..") != std::string::npos)
      return std::nullopt;
    if (!std::filesystem::is_regular_file(p)) return std::nullopt;
    return read_text_file(p);
  };
  return parse_service_template(raw, options, warnings);
}

}  // namespace toscadata
