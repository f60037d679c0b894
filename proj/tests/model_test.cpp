#include <gtest/gtest.h>

#include <random>
#include <set>

#include "toscadata/catalog.hpp"
#include "toscadata/type_system.hpp"

namespace toscadata {
namespace {

TypeDefinition node_type(std::string name, std::optional<std::string> parent) {
  TypeDefinition d;
  d.name = std::move(name);
  d.kind = TypeKind::node;
  d.derived_from = std::move(parent);
  return d;
}

PropertyDefinition prop(std::string name, std::optional<Value> def = std::nullopt) {
  PropertyDefinition p;
  p.name = std::move(name);
  p.default_value = std::move(def);
  return p;
}

// Walks derived_from links directly.
bool ancestor_walk(const TypeSystem& ts, std::string a, const std::string& b) {
  for (int guard = 0; guard < 64; ++guard) {
    if (a == b) return true;
    const auto& d = ts.definition(a);
    if (!d.derived_from) return false;
    a = *d.derived_from;
  }
  return false;
}

TEST(TypeSystem, ResolvesAncestryRootFirst) {
  TypeSystem ts(builtin_catalog(), {});
  const auto& r = ts.resolve(names::kConsS3Bucket);
  ASSERT_GE(r.ancestry.size(), 4u);
  EXPECT_EQ(r.ancestry.front(), names::kDataPipeline);
  EXPECT_EQ(r.ancestry.back(), names::kConsS3Bucket);
  EXPECT_NE(std::find(r.ancestry.begin(), r.ancestry.end(), names::kSourcePB), r.ancestry.end());
}

TEST(TypeSystem, SubtypeMatchesDerivationWalkForAllPairs) {
  TypeSystem ts(builtin_catalog(), {});
  auto all = ts.names();
  for (const auto& a : all)
    for (const auto& b : all) EXPECT_EQ(ts.is_subtype(a, b), ancestor_walk(ts, a, b)) << a << " " << b;
}

TEST(TypeSystem, SubtypeIsReflexiveAndTransitive) {
  TypeSystem ts(builtin_catalog(), {});
  auto all = ts.names();
  for (const auto& a : all) EXPECT_TRUE(ts.is_subtype(a, a));
  for (const auto& a : all)
    for (const auto& b : all) {
      if (!ts.is_subtype(a, b)) continue;
      for (const auto& c : all)
        if (ts.is_subtype(b, c)) EXPECT_TRUE(ts.is_subtype(a, c)) << a << " " << b << " " << c;
    }
}

TEST(TypeSystem, ResolvedPropertiesAreTheOverriddenUnionOfTheChain) {
  TypeSystem ts(builtin_catalog(), {});
  for (const auto& name : ts.names()) {
    const auto& r = ts.resolve(name);
    std::map<std::string, PropertyDefinition> expect;
    for (const auto& ancestor : r.ancestry)
      for (const auto& [pname, p] : ts.definition(ancestor).properties) expect[pname] = p;
    std::erase_if(expect, [](const auto& kv) { return kv.second.status == "unsupported"; });
    EXPECT_EQ(r.properties, expect) << name;
  }
}

TEST(TypeSystem, StandaloneDropsSchedulingStrategy) {
  TypeSystem ts(builtin_catalog(), {});
  EXPECT_TRUE(ts.resolve(names::kPipelineBlock).find_property(names::kSchedulingStrategy));
  EXPECT_FALSE(ts.resolve(names::kAWSCopyS3ToS3).find_property(names::kSchedulingStrategy));
  EXPECT_TRUE(ts.resolve(names::kAWSCopyS3ToS3).find_property(names::kSchedulingPeriodCron));
}

TEST(TypeSystem, DerivedDeclarationReplacesInheritedOne) {
  auto base = node_type("x.Base", names::kRootNode);
  base.properties["p"] = prop("p", Value{std::string("base")});
  auto derived = node_type("x.Derived", "x.Base");
  derived.properties["p"] = prop("p", Value{std::string("derived")});
  TypeSystem ts(builtin_catalog(), {base, derived});
  EXPECT_EQ(std::get<std::string>(*ts.resolve("x.Derived").properties.at("p").default_value),
            "derived");
  EXPECT_TRUE(ts.is_subtype("x.Derived", names::kRootNode));
  EXPECT_FALSE(ts.is_subtype(names::kRootNode, "x.Derived"));
}

TEST(TypeSystem, CycleIsReportedAndDoesNotPoisonOthers) {
  TypeSystem ts(builtin_catalog(), {node_type("x.A", "x.B"), node_type("x.B", "x.A"),
                                    node_type("x.C", names::kRootNode)});
  try {
    ts.resolve("x.A");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CyclicDerivation);
  }
  EXPECT_THROW(ts.is_subtype("x.B", names::kRootNode), Error);
  EXPECT_NO_THROW(ts.resolve("x.C"));
  EXPECT_NO_THROW(ts.resolve(names::kConsS3Bucket));
}

TEST(TypeSystem, SelfDerivationIsACycle) {
  TypeSystem ts(builtin_catalog(), {node_type("x.Self", "x.Self")});
  try {
    ts.resolve("x.Self");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CyclicDerivation);
  }
}

TEST(TypeSystem, UnknownParentAndUnknownName) {
  TypeSystem ts(builtin_catalog(), {node_type("x.Orphan", "x.Missing")});
  for (const char* name : {"x.Orphan", "x.Nowhere"}) {
    try {
      ts.resolve(name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnknownType) << name;
    }
  }
}

TEST(TypeSystem, RandomChainsAgreeWithWalk) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::vector<TypeDefinition> defs;
    for (int i = 0; i < 12; ++i) {
      std::optional<std::string> parent = names::kRootNode;
      if (i > 0 && rng() % 4 != 0) parent = "r." + std::to_string(rng() % i);
      defs.push_back(node_type("r." + std::to_string(i), parent));
    }
    TypeSystem ts(builtin_catalog(), defs);
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        auto x = "r." + std::to_string(a), y = "r." + std::to_string(b);
        EXPECT_EQ(ts.is_subtype(x, y), ancestor_walk(ts, x, y));
      }
  }
}

ServiceTemplate one_node() {
  ServiceTemplate t;
  NodeTemplate n;
  n.name = "C";
  n.type = names::kConsS3Bucket;
  n.properties["BucketName"] = Value{std::string("in")};
  n.properties["Region"] = Value{std::string("{ get_property: [SELF, BucketName] }")};
  n.properties["cred_file_path"] = Intrinsic{Intrinsic::Function::get_artifact, {"SELF", "creds"}};
  n.artifacts["creds"] = {"creds/aws.json", std::nullopt};
  t.node_templates["C"] = n;
  return t;
}

TEST(Intrinsics, LiteralDefaultAndCalls) {
  ServiceTemplate t = one_node();
  TypeSystem ts = TypeSystem::for_template(t);
  const auto& n = t.node("C");
  EXPECT_EQ(property_value(n, "BucketName", t, ts), Value{std::string("in")});
  EXPECT_EQ(property_value(n, "Region", t, ts), Value{std::string("in")});
  EXPECT_EQ(property_value(n, "cred_file_path", t, ts), Value{std::string("creds/aws.json")});
  EXPECT_EQ(property_value(n, names::kSchedulingStrategy, t, ts),
            Value{std::string(names::kEventDriven)});
}

TEST(Intrinsics, Failures) {
  ServiceTemplate t = one_node();
  TypeSystem ts = TypeSystem::for_template(t);
  auto code = [&](const PropertyExpression& e) {
    try {
      evaluate_intrinsic(e, t.node("C"), t, ts);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::Io;
  };
  using F = Intrinsic::Function;
  EXPECT_EQ(code(Intrinsic{F::get_artifact, {"SELF", "missing"}}), ErrorCode::UnknownArtifact);
  EXPECT_EQ(code(Intrinsic{F::get_property, {"Other", "x"}}), ErrorCode::UnknownTemplate);
  EXPECT_EQ(code(Intrinsic{F::get_property, {"SELF", "nope"}}), ErrorCode::UnknownProperty);
  // Region -> BucketName chain is fine; a self loop is not.
  t.node("C").properties["Region"] = Value{std::string("{ get_property: [SELF, Region] }")};
  EXPECT_EQ(code(Intrinsic{F::get_property, {"SELF", "Region"}}), ErrorCode::UnknownProperty);
}

TEST(Intrinsics, TextForm) {
  auto call = parse_intrinsic_text("{ get_artifact: [SELF, credFile]}");
  ASSERT_TRUE(call);
  EXPECT_EQ(call->function, Intrinsic::Function::get_artifact);
  EXPECT_EQ(call->arguments, (std::vector<std::string>{"SELF", "credFile"}));
  EXPECT_TRUE(parse_intrinsic_text("{ get_artifact: [SELF, credFile ] }"));
  EXPECT_FALSE(parse_intrinsic_text("firstbucket"));
  EXPECT_FALSE(parse_intrinsic_text("{ concat: [a, b] }"));
}

TEST(Occurrences, Admits) {
  Occurrences exact{1, std::uint32_t{1}};
  EXPECT_FALSE(exact.admits(0));
  EXPECT_TRUE(exact.admits(1));
  EXPECT_FALSE(exact.admits(2));
  Occurrences open{1, Unbounded{}};
  EXPECT_TRUE(open.admits(1000));
  EXPECT_FALSE(open.admits(0));
}

}  // namespace
}  // namespace toscadata
