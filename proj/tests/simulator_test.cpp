#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "toscadata/catalog.hpp"
#include "toscadata/cipher.hpp"
#include "toscadata/simulator.hpp"
#include "toscadata/verifier.hpp"

namespace toscadata {
namespace {

using testing::load_fixture;

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

std::vector<std::string> blocks(const FlowItem& item) {
  std::vector<std::string> out;
  for (const auto& v : item.trail) out.push_back(v.block);
  return out;
}

const Delivery* delivery_at(const Flow& f, const std::string& block) {
  for (const auto& d : f.deliveries())
    if (d.block == block) return &d;
  return nullptr;
}

TEST(Builtins, Examples) {
  EXPECT_EQ(builtin::grayscale({200, 100}), (Bytes{100, 50}));
  EXPECT_EQ(builtin::blur({0, 0, 0}), (Bytes{0, 0, 0}));
  EXPECT_EQ(builtin::blur({3, 6, 9}), (Bytes{4, 6, 8}));
  EXPECT_EQ(builtin::run_length_encode({7, 7, 7, 1}), (Bytes{3, 7, 1, 1}));
  EXPECT_TRUE(builtin::blur({}).empty());
  EXPECT_EQ(builtin::blur({9}), (Bytes{9}));
}

TEST(Builtins, AgreeWithOracles) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    Bytes b = random_bytes(rng, rng() % 200);
    if (i % 2) b = Bytes(rng() % 700, static_cast<std::uint8_t>(rng()));
    EXPECT_EQ(builtin::grayscale(b), oracle::halve(b));
    EXPECT_EQ(builtin::blur(b), oracle::mean3(b));
    EXPECT_EQ(builtin::run_length_encode(b), oracle::rle(b));
    EXPECT_EQ(oracle::unrle(builtin::run_length_encode(b)), b);
  }
}

TEST(Instantiate, Fig8Stages) {
  Flow f = Flow::instantiate(load_fixture("fig8.yaml"));
  EXPECT_EQ(f.stages().size(), 6u);
  EXPECT_EQ(f.edges().size(), 5u);
  EXPECT_EQ(f.order().front(), "ConsMinIO_0");
  EXPECT_EQ(f.order().back(), "PubsAzureBlob_0");
}

TEST(Instantiate, EmptyTopology) {
  Flow f = Flow::instantiate(ServiceTemplate{});
  EXPECT_TRUE(f.stages().empty());
  f.run_until(10);
  EXPECT_TRUE(f.conserved());
}

TEST(Instantiate, UnsupportedStandalone) {
  auto t = load_fixture("fig1.yaml");
  t.node_templates["Shell"] =
      NodeTemplate{"Shell", names::kAWSShellCommand, {}, {}, {{"host", "AWSPlatform", std::nullopt}}, std::nullopt};
  try {
    Flow::instantiate(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedType);
  }
}

TEST(Fig8, EndToEnd) {
  Flow f = Flow::instantiate(load_fixture("fig8.yaml"));
  auto schedule = parse_schedule(testing::read_fixture("schedules/fig8_ten.txt"),
                                 testing::fixture("schedules"));
  ASSERT_EQ(schedule.size(), 10u);
  f.schedule(schedule);
  while (f.clock() <= 100) {
    f.tick();
    ASSERT_TRUE(f.conserved()) << "tick " << f.clock() - 1;
  }
  const Bucket* gcs = f.bucket("gcs", "radongcs");
  const Bucket* azure = f.bucket("azure", "radonblob");
  ASSERT_TRUE(gcs && azure);
  EXPECT_EQ(gcs->size(), 10u);
  EXPECT_EQ(azure->size(), 10u);
  for (const auto& inj : schedule) {
    Bytes processed = oracle::mean3(oracle::halve(inj.payload));
    EXPECT_EQ(gcs->at(inj.key).data, processed) << inj.key;
    EXPECT_EQ(azure->at(inj.key).data, oracle::rle(processed)) << inj.key;
  }
  const std::vector<std::string> head{"ConsMinIO_0", "InvokeLambda_0", "InvokeLambda_1"};
  for (const auto& d : f.deliveries()) {
    auto b = blocks(d.item);
    auto expect = head;
    if (d.block == "PubGCS_0")
      expect.push_back("PubGCS_0");
    else
      expect.insert(expect.end(), {"InvokeImageFaaSFunction_0", "PubsAzureBlob_0"});
    EXPECT_EQ(b, expect);
    for (std::size_t i = 1; i < d.item.trail.size(); ++i)
      EXPECT_LE(d.item.trail[i - 1].tick, d.item.trail[i].tick);
  }
  EXPECT_EQ(f.deliveries().size(), 20u);
  EXPECT_TRUE(f.errors().empty());
  auto m = f.metrics();
  EXPECT_EQ(m.per_block.at("InvokeLambda_1").consumed, 10u);
  EXPECT_EQ(m.per_block.at("InvokeLambda_1").emitted, 20u);
  EXPECT_EQ(m.final_tick, 100);
}

TEST(Fig8, Deterministic) {
  auto run = [] {
    Flow f = Flow::instantiate(load_fixture("fig8.yaml"));
    f.schedule(parse_schedule(testing::read_fixture("schedules/fig8_ten.txt"),
                              testing::fixture("schedules")));
    auto m = f.run_until(100);
    std::map<std::string, Bytes> contents;
    for (const auto& [ref, bucket] : f.stores())
      for (const auto& [key, obj] : bucket) contents[ref.label() + "/" + key] = obj.data;
    return std::make_pair(metrics_json(m), contents);
  };
  EXPECT_EQ(run(), run());
}

Flow two_stage(bool cron) {
  auto t = load_fixture("two_stage.yaml");
  if (cron) {
    auto& p = t.node("Consume").properties;
    p[names::kSchedulingStrategy] = Value{std::string(names::kCronDriven)};
    p[names::kSchedulingPeriodCron] = Value{std::string("0 * * * * ?")};
  }
  return Flow::instantiate(t);
}

TEST(Scheduling, EventDrivenSameTick) {
  Flow f = two_stage(false);
  f.schedule({3, {"s3", "inbox"}, "k", {1, 2, 3}});
  f.run_until(10);
  ASSERT_EQ(f.deliveries().size(), 1u);
  EXPECT_EQ(f.deliveries()[0].tick, 3);
  EXPECT_EQ(f.bucket("s3", "outbox")->at("k").data, (Bytes{1, 2, 3}));
}

TEST(Scheduling, CronDelaysToNextMinute) {
  Flow f = two_stage(true);
  f.schedule({3, {"s3", "inbox"}, "k", {1}});
  f.run_until(59);
  EXPECT_TRUE(f.deliveries().empty());
  f.run_until(130);
  ASSERT_EQ(f.deliveries().size(), 1u);
  EXPECT_EQ(f.deliveries()[0].tick, 60);
}

TEST(Scheduling, RandomCronMatchesScan) {
  std::mt19937_64 rng(8);
  int runs = 0;
  while (runs < 40) {
    std::string expr = oracle::random_cron(rng);
    std::int64_t at = static_cast<std::int64_t>(rng() % 600);
    std::int64_t want = oracle::cron_next_scan(expr, at);
    if (want < 0 || want - at > 4000) continue;
    ++runs;
    auto t = load_fixture("two_stage.yaml");
    auto& p = t.node("Consume").properties;
    p[names::kSchedulingStrategy] = Value{std::string(names::kCronDriven)};
    p[names::kSchedulingPeriodCron] = Value{expr};
    Flow f = Flow::instantiate(t);
    f.schedule({at, {"s3", "inbox"}, "k", {1}});
    f.run_until(want);
    ASSERT_EQ(f.deliveries().size(), 1u) << expr << " @" << at;
    EXPECT_EQ(f.deliveries()[0].tick, want) << expr << " @" << at;
  }
}

TEST(Stores, OverwriteIsANewEvent) {
  Flow f = two_stage(false);
  f.put_object("s3", "inbox", "k", {1});
  f.tick();
  f.put_object("s3", "inbox", "k", {2});
  f.tick();
  EXPECT_EQ(f.metrics().per_block.at("Consume").consumed, 2u);
  EXPECT_EQ(f.bucket("s3", "outbox")->at("k").data, (Bytes{2}));
}

TEST(Stores, UnreferencedBucket) {
  Flow f = two_stage(false);
  f.put_object("gcs", "elsewhere", "k", {1});
  f.run_until(5);
  EXPECT_EQ(f.bucket("gcs", "elsewhere")->size(), 1u);
  EXPECT_EQ(f.items_created(), 0u);
}

TEST(Functions, Registry) {
  Flow f = Flow::instantiate(load_fixture("fig8.yaml"));
  EXPECT_TRUE(f.has_function(builtin::kGrayscale));
  auto code = [&](const std::string& n) {
    try {
      f.register_function(n, [](const Bytes& b) { return b; });
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code(builtin::kBlur), ErrorCode::DuplicateFunction);
  EXPECT_EQ(code(""), ErrorCode::SchemaError);
  EXPECT_EQ(code("custom"), ErrorCode::Io);
  EXPECT_TRUE(f.has_function("custom"));
}

TEST(Functions, UnregisteredIsAStageError) {
  auto t = load_fixture("fig8.yaml");
  t.node("InvokeLambda_1").properties["function_name"] = Value{std::string("img-missing")};
  Flow f = Flow::instantiate(t);
  f.schedule({0, {"minio", "firstbucket"}, "a", {1, 2}});
  auto m = f.run_until(5);
  EXPECT_EQ(m.per_block.at("InvokeLambda_1").errors, 1u);
  EXPECT_EQ(m.total_errors(), 1u);
  ASSERT_EQ(f.errors().size(), 1u);
  EXPECT_EQ(blocks(f.errors()[0].item),
            (std::vector<std::string>{"ConsMinIO_0", "InvokeLambda_0", "InvokeLambda_1"}));
  EXPECT_TRUE(f.conserved());
}

TEST(Functions, LocalScriptByPath) {
  auto t = load_fixture("cyclic.yaml");
  // Break the cycle and add a sink.
  t.node("StepB").requirements.pop_back();
  t.node_templates["Out"] = NodeTemplate{"Out", names::kPublishLocal, {{"directory", Value{std::string("/out")}}}, {}, {{"host", "Nifi", std::nullopt}}, std::nullopt};
  t.node("StepB").requirements.push_back({"ConnectToPipeline", "Out", std::nullopt});
  Flow f = Flow::instantiate(t);
  f.register_function("scripts/a.py", [](const Bytes& b) { Bytes o = b; o.push_back('a'); return o; });
  f.register_function("scripts/b.py", [](const Bytes& b) { Bytes o = b; o.push_back('b'); return o; });
  f.put_object("local", "/data/in", "x", {'x'});
  f.run_until(0);
  EXPECT_EQ(f.bucket("local", "/out")->at("x").data, (Bytes{'x', 'a', 'b'}));
}

TEST(Cipher, PipelineRoundTrip) {
  auto fixed = verify(load_fixture("encryption.yaml"), {true, 5}).verified;
  std::mt19937_64 rng(6);
  Flow f = Flow::instantiate(fixed);
  std::vector<Bytes> sent;
  for (int i = 0; i < 50; ++i) {
    sent.push_back(random_bytes(rng, 16));
    f.schedule({i, {"s3", "plain"}, "obj" + std::to_string(i), sent.back()});
  }
  f.run_until(60);
  const Bucket* out = f.bucket("s3", "restored");
  ASSERT_TRUE(out);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(out->at("obj" + std::to_string(i)).data, sent[i]);
}

TEST(Cipher, MismatchedPassphrasesScramble) {
  Flow f = Flow::instantiate(load_fixture("encryption.yaml"));
  std::mt19937_64 rng(7);
  std::vector<Bytes> sent;
  for (int i = 0; i < 100; ++i) {
    sent.push_back(random_bytes(rng, 16));
    f.schedule({i, {"s3", "plain"}, "obj" + std::to_string(i), sent.back()});
  }
  f.run_until(100);
  int differ = 0;
  for (int i = 0; i < 100; ++i) differ += f.bucket("s3", "restored")->at("obj" + std::to_string(i)).data != sent[i];
  EXPECT_GE(differ, 99);
}

TEST(Route, AttributePredicate) {
  auto t = load_fixture("two_stage.yaml");
  t.node("Consume").requirements.back().target = "Router";
  t.node_templates["Router"] = NodeTemplate{
      "Router", names::kRouteToRemote,
      {{"route_predicate", Value{std::string("key=a->Publish; key=b->Other")}}}, {},
      {{"host", "Nifi", std::nullopt}, {"ConnectToPipeline", "Publish", std::nullopt}}, std::nullopt};
  Flow f = Flow::instantiate(t);
  f.put_object("s3", "inbox", "a", {1});
  f.put_object("s3", "inbox", "b", {2});
  f.put_object("s3", "inbox", "c", {3});
  f.run_until(0);
  EXPECT_EQ(f.bucket("s3", "outbox")->size(), 1u);
  EXPECT_EQ(f.errors().size(), 2u);
  EXPECT_TRUE(f.conserved());
}

TEST(Standalone, CopiesAtCronTicks) {
  auto t = load_fixture("fig1.yaml");
  t.node_templates["Copy"] = NodeTemplate{
      "Copy", names::kAWSCopyS3ToS3,
      {{"source_bucket", Value{std::string("a")}},
       {"destination_bucket", Value{std::string("b")}},
       {"cred_file_path", Value{std::string("c")}},
       {"log_bucket", Value{std::string("l")}},
       {names::kSchedulingPeriodCron, Value{std::string("*/10 * * * * ?")}}},
      {}, {{"host", "AWSPlatform", std::nullopt}}, std::nullopt};
  Flow f = Flow::instantiate(t);
  f.schedule({3, {"s3", "a"}, "x", {9}});
  f.run_until(9);
  EXPECT_EQ(f.bucket("s3", "b"), nullptr);
  f.run_until(10);
  ASSERT_NE(f.bucket("s3", "b"), nullptr);
  EXPECT_EQ(f.bucket("s3", "b")->at("x").data, (Bytes{9}));
  f.run_until(40);
  EXPECT_EQ(f.metrics().per_block.at("Copy").consumed, 1u);
}

TEST(Schedule, Parsing) {
  auto s = parse_schedule("# c\n\n5 s3 b k 0x0aFF\n  7 gcs x y 0x  # trailing\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tick, 5);
  EXPECT_EQ(s[0].store.label(), "s3/b");
  EXPECT_EQ(s[0].payload, (Bytes{0x0a, 0xff}));
  EXPECT_TRUE(s[1].payload.empty());
  for (const char* bad : {"x s3 b k 0x00", "1 s3 b 0x00", "1 s3 b k 0xZZ", "1 s3 b k 0x0",
                          "-1 s3 b k 0x00", "1 s3 b k missing-file.bin"}) {
    try {
      parse_schedule(bad, testing::fixture("schedules"));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ScheduleSyntax) << bad;
    }
  }
}

TEST(Metrics, JsonShape) {
  Flow f = two_stage(false);
  f.put_object("s3", "inbox", "k", {1});
  auto json = metrics_json(f.run_until(2));
  EXPECT_NE(json.find("\"per_block\""), std::string::npos);
  EXPECT_NE(json.find("\"Consume\": {\n      \"consumed\": 1,\n      \"emitted\": 1,\n      \"errors\": 0"),
            std::string::npos)
      << json;
  EXPECT_NE(json.find("\"s3/outbox\": 1"), std::string::npos);
  EXPECT_NE(json.find("\"final_tick\": 2"), std::string::npos);
}

}  // namespace
}  // namespace toscadata
