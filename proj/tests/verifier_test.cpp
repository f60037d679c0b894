#include <gtest/gtest.h>

#include "support.hpp"
#include "toscadata/catalog.hpp"
#include "toscadata/verifier.hpp"

namespace toscadata {
namespace {

using testing::load_fixture;

std::vector<Diagnostic> with_rule(const std::vector<Diagnostic>& ds, const char* rule) {
  std::vector<Diagnostic> out;
  for (const auto& d : ds)
    if (d.rule == rule) out.push_back(d);
  return out;
}

std::size_t count_edges(const ServiceTemplate& t, const std::string& from, const std::string& to) {
  std::size_t n = 0;
  for (const auto& a : t.node(from).requirements)
    if (a.target == to && a.requirement != "host") ++n;
  return n;
}

RequirementAssignment& edge(ServiceTemplate& t, const std::string& from, const std::string& to) {
  for (auto& a : t.node(from).requirements)
    if (a.target == to && a.requirement != "host") return a;
  throw std::logic_error("no edge");
}

TEST(HostChain, Fig1) {
  auto t = load_fixture("fig1.yaml");
  EXPECT_EQ(host_chain("ConsumeS3Bucket", t),
            (std::vector<std::string>{"ConsumeS3Bucket", "Nifi_Platform", "EC2_VM", "AWSPlatform"}));
  EXPECT_EQ(colocated("ConsumeS3Bucket", "PublishGoogleBucket", t), Locality::remote);
}

TEST(HostChain, Fig8GoogleSide) {
  auto t = load_fixture("fig8.yaml");
  auto chain = host_chain("PubGCS_0", t);
  EXPECT_EQ(chain.back(), "GCP_VM");
  EXPECT_EQ(colocated("InvokeLambda_0", "InvokeLambda_1", t), Locality::local);
  EXPECT_EQ(colocated("InvokeImageFaaSFunction_0", "PubsAzureBlob_0", t), Locality::local);
}

TEST(HostChain, Errors) {
  auto t = load_fixture("fig1.yaml");
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  auto self = t;
  self.node("Nifi_Platform").requirements[0].target = "Nifi_Platform";
  EXPECT_EQ(code([&] { host_chain("ConsumeS3Bucket", self); }), ErrorCode::HostCycle);
  auto missing = t;
  missing.node("ConsumeS3Bucket").requirements.erase(missing.node("ConsumeS3Bucket").requirements.begin());
  EXPECT_EQ(code([&] { colocated("ConsumeS3Bucket", "PublishGoogleBucket", missing); }),
            ErrorCode::MissingHost);
  EXPECT_EQ(code([&] { colocated("EC2_VM", "PublishGoogleBucket", t); }), ErrorCode::NotAPipeline);
}

TEST(Verify, CleanFixtures) {
  for (const char* f : {"fig1.yaml", "fig8.yaml", "two_stage.yaml", "cyclic.yaml"}) {
    auto t = load_fixture(f);
    auto r = verify(t);
    EXPECT_TRUE(r.diagnostics.empty()) << f << "\n" << report_text(r);
    EXPECT_EQ(r.verified, t);
    auto fixed = verify(t, {true, 1});
    EXPECT_EQ(fixed.verified, t) << f;
    EXPECT_FALSE(fixed.fixed);
  }
}

TEST(Verify, Fig6DuplicateConnection) {
  auto t = load_fixture("fig6.yaml");
  auto r = verify(t);
  ASSERT_EQ(r.diagnostics.size(), 1u) << report_text(r);
  EXPECT_EQ(r.diagnostics[0].rule, rules::kDuplicateConn);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::fixable);
  EXPECT_FALSE(r.diagnostics[0].fix);
  EXPECT_EQ(r.diagnostics[0].nodes, (std::vector<std::string>{"ConsS3Bucket", "PubGCS"}));
  EXPECT_TRUE(r.has_problems());
  EXPECT_FALSE(r.has_errors());

  auto fixed = verify(t, {true, 1});
  ASSERT_EQ(fixed.diagnostics.size(), 1u);
  EXPECT_TRUE(fixed.diagnostics[0].fix);
  EXPECT_TRUE(fixed.fixed);
  EXPECT_FALSE(fixed.has_problems());
  EXPECT_EQ(count_edges(fixed.verified, "ConsS3Bucket", "PubGCS"), 1u);
  EXPECT_EQ(edge(fixed.verified, "ConsS3Bucket", "PubGCS").requirement, "connectToPipelineRemote");
  EXPECT_TRUE(verify(fixed.verified).diagnostics.empty());
}

TEST(Verify, DuplicateWhereNeitherEdgeFits) {
  auto t = load_fixture("fig6.yaml");
  // Move PubGCS onto Nifi_1: the remote edge is now wrong as well.
  t.node("PubGCS").requirements[0].target = "Nifi_1";
  auto& reqs = t.node("ConsS3Bucket").requirements;
  reqs[1].relationship = names::kConnectNifiRemote;
  auto fixed = verify(t, {true, 1});
  EXPECT_FALSE(fixed.has_problems()) << report_text(fixed);
  EXPECT_EQ(count_edges(fixed.verified, "ConsS3Bucket", "PubGCS"), 1u);
  const auto& kept = edge(fixed.verified, "ConsS3Bucket", "PubGCS");
  EXPECT_EQ(kept.requirement, "connectToPipeline");
  EXPECT_FALSE(kept.relationship);
}

TEST(Verify, SameNifiRemoteIsRewritten) {
  auto t = load_fixture("two_stage.yaml");
  edge(t, "Consume", "Publish").requirement = "connectToPipelineRemote";
  auto r = verify(t);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].rule, rules::kLocality);
  auto fixed = verify(t, {true, 1});
  EXPECT_EQ(edge(fixed.verified, "Consume", "Publish").requirement, "connectToPipeline");
  EXPECT_TRUE(verify(fixed.verified).diagnostics.empty());
}

TEST(Verify, RelationshipOverrideDecidesLocality) {
  auto t = load_fixture("two_stage.yaml");
  edge(t, "Consume", "Publish").relationship = names::kConnectNifiRemote;
  auto r = verify(t);
  ASSERT_EQ(with_rule(r.diagnostics, rules::kLocality).size(), 1u) << report_text(r);
  auto fixed = verify(t, {true, 1});
  EXPECT_FALSE(edge(fixed.verified, "Consume", "Publish").relationship);
  EXPECT_TRUE(verify(fixed.verified).diagnostics.empty());
}

TEST(Requirements, SourceAsTargetIsRejected) {
  auto t = load_fixture("fig1.yaml");
  t.node("PublishGoogleBucket").type = names::kConsGCSBucket;
  t.node("PublishGoogleBucket").properties = {{"bucket", Value{std::string("b")}}};
  auto r = with_rule(verify(t).diagnostics, rules::kReqMatch);
  bool found = std::any_of(r.begin(), r.end(), [](const Diagnostic& d) {
    return d.nodes == std::vector<std::string>{"ConsumeS3Bucket", "PublishGoogleBucket"};
  });
  EXPECT_TRUE(found) << report_text(verify(t));
}

TEST(Requirements, TwoHostsExceedOccurrences) {
  auto t = load_fixture("fig1.yaml");
  t.node("ConsumeS3Bucket").requirements.push_back({"host", "Nifi_Platform_OS", std::nullopt});
  auto r = with_rule(verify(t).diagnostics, rules::kReqMatch);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].nodes, (std::vector<std::string>{"ConsumeS3Bucket"}));
  EXPECT_EQ(r[0].severity, Severity::error);
}

TEST(Requirements, DestinationCannotSend) {
  auto t = load_fixture("fig1.yaml");
  t.node("PublishGoogleBucket").requirements.push_back({"connectToPipeline", "ConsumeS3Bucket", std::nullopt});
  auto r = with_rule(verify(t).diagnostics, rules::kReqMatch);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].nodes, (std::vector<std::string>{"PublishGoogleBucket", "ConsumeS3Bucket"}));
}

TEST(Requirements, DanglingSource) {
  auto t = load_fixture("fig1.yaml");
  auto& reqs = t.node("ConsumeS3Bucket").requirements;
  reqs.pop_back();
  auto r = with_rule(verify(t).diagnostics, rules::kReqMatch);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].nodes, (std::vector<std::string>{"ConsumeS3Bucket"}));
}

TEST(Requirements, WrongRelationshipOverride) {
  auto t = load_fixture("fig1.yaml");
  t.node("ConsumeS3Bucket").requirements.back().relationship = names::kHostedOn;
  auto r = with_rule(verify(t).diagnostics, rules::kReqMatch);
  ASSERT_FALSE(r.empty());
}

TEST(Hosting, PipelineOnCompute) {
  auto t = load_fixture("fig1.yaml");
  t.node("ConsumeS3Bucket").requirements[0].target = "EC2_VM";
  auto r = with_rule(verify(t).diagnostics, rules::kHosting);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].nodes, (std::vector<std::string>{"ConsumeS3Bucket", "EC2_VM"}));
}

TEST(Hosting, AwsStandaloneNeedsAwsPlatform) {
  auto t = load_fixture("fig1.yaml");
  NodeTemplate copy;
  copy.name = "Copy";
  copy.type = names::kAWSCopyS3ToS3;
  copy.properties = {{"source_bucket", Value{std::string("a")}},
                     {"destination_bucket", Value{std::string("b")}},
                     {"cred_file_path", Value{std::string("c")}},
                     {"log_bucket", Value{std::string("l")}}};
  copy.requirements = {{"host", "AWSPlatform", std::nullopt}};
  t.node_templates["Copy"] = copy;
  EXPECT_TRUE(verify(t).diagnostics.empty()) << report_text(verify(t));
  t.node("Copy").requirements[0].target = "OpenStackPlatform";
  auto r = with_rule(verify(t).diagnostics, rules::kHosting);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].nodes, (std::vector<std::string>{"Copy", "OpenStackPlatform"}));
}

TEST(Encryption, MismatchIsRepaired) {
  auto t = load_fixture("encryption.yaml");
  auto r = verify(t);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].rule, rules::kEncryption);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::fixable);
  auto a = verify(t, {true, 42});
  auto b = verify(t, {true, 42});
  auto c = verify(t, {true, 43});
  auto pass = [](const VerifyResult& v, const char* n) {
    return std::get<std::string>(std::get<Value>(v.verified.node(n).properties.at("passphrase")));
  };
  EXPECT_EQ(pass(a, "Encrypt_0"), pass(a, "Decrypt_0"));
  EXPECT_EQ(pass(a, "Encrypt_0").size(), 32u);
  EXPECT_EQ(pass(a, "Encrypt_0").find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(pass(a, "Encrypt_0"), pass(b, "Encrypt_0"));
  EXPECT_NE(pass(a, "Encrypt_0"), pass(c, "Encrypt_0"));
  EXPECT_TRUE(verify(a.verified).diagnostics.empty());
}

TEST(Encryption, LonelyNodes) {
  auto t = load_fixture("encryption.yaml");
  t.node("Encrypt_0").requirements[1].target = "Sink";
  auto r = with_rule(verify(t).diagnostics, rules::kEncryption);
  ASSERT_EQ(r.size(), 2u) << report_text(verify(t));
  EXPECT_EQ(r[0].nodes, (std::vector<std::string>{"Encrypt_0"}));
  EXPECT_EQ(r[1].nodes, (std::vector<std::string>{"Decrypt_0"}));
  EXPECT_EQ(r[0].severity, Severity::error);
}

TEST(Encryption, NoCipherNodesNoDiagnostics) {
  EXPECT_TRUE(with_rule(verify(load_fixture("fig8.yaml")).diagnostics, rules::kEncryption).empty());
}

TEST(Encryption, OnePassphrasePerComponent) {
  auto t = load_fixture("encryption.yaml");
  // Second Encrypt feeding the same Decrypt.
  NodeTemplate e2 = t.node("Encrypt_0");
  e2.name = "Encrypt_1";
  e2.properties["passphrase"] = Value{std::string("c")};
  t.node_templates["Encrypt_1"] = e2;
  t.node("Source").requirements.push_back({"connectToPipeline", "Encrypt_1", std::nullopt});
  auto r = verify(t, {true, 3});
  EXPECT_FALSE(r.has_problems()) << report_text(r);
  auto p = [&](const char* n) { return std::get<Value>(r.verified.node(n).properties.at("passphrase")); };
  EXPECT_EQ(p("Encrypt_0"), p("Decrypt_0"));
  EXPECT_EQ(p("Encrypt_1"), p("Decrypt_0"));
}

TEST(Scheduling, Strategies) {
  auto t = load_fixture("two_stage.yaml");
  auto& props = t.node("Consume").properties;
  props[names::kSchedulingStrategy] = Value{std::string("CRON_DRIVEN")};
  props[names::kSchedulingPeriodCron] = Value{std::string("0 * * * * ?")};
  EXPECT_TRUE(verify(t).diagnostics.empty());
  props[names::kSchedulingPeriodCron] = Value{std::string("not a cron")};
  auto r = verify(t).diagnostics;
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].rule, rules::kScheduling);
  EXPECT_EQ(r[0].severity, Severity::error);
  props[names::kSchedulingStrategy] = Value{std::string("TIMER_DRIVEN")};
  ASSERT_EQ(with_rule(verify(t).diagnostics, rules::kScheduling).size(), 1u);
  props[names::kSchedulingStrategy] = Value{std::string("EVENT_DRIVEN")};
  EXPECT_TRUE(verify(t).diagnostics.empty());
}

TEST(Report, JsonShape) {
  auto r = verify(load_fixture("fig6.yaml"), {true, 1});
  std::string json = report_json(r);
  EXPECT_NE(json.find("\"diagnostics\""), std::string::npos);
  EXPECT_NE(json.find("\"rule\": \"R3-DUPLICATE-CONN\""), std::string::npos);
  EXPECT_NE(json.find("\"fixed\": true"), std::string::npos);
  EXPECT_LT(json.find("\"rule\""), json.find("\"severity\""));
  EXPECT_LT(json.find("\"message\""), json.find("\"fix\""));
}

TEST(Report, RulesAreOrdered) {
  auto t = load_fixture("encryption.yaml");
  t.node("Sink").requirements[0].target = "VM";
  t.node("Source").properties[names::kSchedulingStrategy] = Value{std::string("X")};
  auto r = verify(t).diagnostics;
  ASSERT_GE(r.size(), 3u);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LE(r[i - 1].rule.substr(0, 2), r[i].rule.substr(0, 2));
}

TEST(Passphrase, Generator) {
  std::mt19937_64 a(5), b(5);
  EXPECT_EQ(generate_passphrase(a), generate_passphrase(b));
  EXPECT_NE(generate_passphrase(a), generate_passphrase(a));
}

}  // namespace
}  // namespace toscadata
