#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toscadata/cron.hpp"
#include "toscadata/model.hpp"
#include "toscadata/type_system.hpp"

namespace toscadata {

using Transform = std::function<Bytes(const Bytes&)>;

namespace builtin {
inline constexpr const char* kGrayscale = "img-grayscale-nifi";
inline constexpr const char* kBlur = "img-blur-nifi";
inline constexpr const char* kCompress = "azure-compress";

Bytes grayscale(const Bytes& in);
Bytes blur(const Bytes& in);
Bytes run_length_encode(const Bytes& in);
}  // namespace builtin

struct Visit {
  std::string block;
  std::int64_t tick = 0;

  bool operator==(const Visit&) const = default;
};

struct FlowItem {
  std::uint64_t id = 0;
  Bytes payload;
  std::map<std::string, std::string> attributes;
  std::vector<Visit> trail;
};

struct StoreRef {
  std::string provider;
  std::string bucket;

  auto operator<=>(const StoreRef&) const = default;
  std::string label() const { return provider + "/" + bucket; }
};

struct StoredObject {
  Bytes data;
  std::uint64_t version = 0;
};

using Bucket = std::map<std::string, StoredObject>;

enum class StageKind {
  consumer,
  publisher,
  function,    // Invoke* and Execute*, keyed transform
  encrypt,
  decrypt,
  route,
  aws_copy,
};

struct RouteRule {
  std::string attribute;
  std::string value;
  std::string target;
};

struct Stage {
  std::string name;
  std::string type;
  StageKind kind = StageKind::function;
  std::optional<CronExpr> cron;  // nullopt: event driven
  std::optional<StoreRef> store;        // consumer / publisher / copy source
  std::optional<StoreRef> destination;  // copy target
  std::string function_key;
  std::string passphrase;
  std::vector<RouteRule> routes;
  std::vector<std::size_t> inputs;   // edge indices
  std::vector<std::size_t> outputs;  // edge indices
};

struct FlowEdge {
  std::string from;
  std::string to;
  std::deque<FlowItem> queue;
};

struct BlockMetrics {
  std::uint64_t consumed = 0;
  std::uint64_t emitted = 0;
  std::uint64_t errors = 0;

  bool operator==(const BlockMetrics&) const = default;
};

struct Metrics {
  std::map<std::string, BlockMetrics> per_block;
  std::map<std::string, std::size_t> stores;  // "provider/bucket" -> key count
  std::int64_t final_tick = 0;

  bool operator==(const Metrics&) const = default;
  std::uint64_t total_errors() const;
};

std::string metrics_json(const Metrics& m);

struct Delivery {
  FlowItem item;
  std::string block;
  StoreRef store;
  std::string key;
  std::int64_t tick = 0;
};

struct StageError {
  FlowItem item;
  std::string block;
  std::string message;
  std::int64_t tick = 0;
};

struct SimEvent {
  enum class Kind { consumed, emitted, delivered, error, copied };
  std::int64_t tick = 0;
  std::string block;
  Kind kind = Kind::consumed;
  std::uint64_t item = 0;
  std::string detail;
};

struct Injection {
  std::int64_t tick = 0;
  StoreRef store;
  std::string key;
  Bytes payload;
};

/// Lines of `<tick> <provider> <bucket> <key> <0xHEX | file>`; files are
/// read relative to `base`. Blank lines and `#` comments are skipped.
std::vector<Injection> parse_schedule(const std::string& text,
                                      const std::filesystem::path& base = {});

class Flow {
 public:
  /// Throws Error(UnsupportedType) for pipeline types without behavior.
  static Flow instantiate(const ServiceTemplate& t);

  void register_function(const std::string& name, Transform transform);
  bool has_function(const std::string& name) const { return functions_.contains(name); }

  /// Stores the object now; bound consumers see it at the current tick.
  void put_object(const std::string& provider, const std::string& bucket,
                  const std::string& key, Bytes payload);
  void schedule(Injection injection);
  void schedule(const std::vector<Injection>& injections);

  /// Processes the current tick, then advances the clock by one.
  std::vector<SimEvent> tick();
  /// Ticks until the clock passes `t_end`.
  Metrics run_until(std::int64_t t_end);

  std::int64_t clock() const { return clock_; }
  Metrics metrics() const;

  const std::vector<Stage>& stages() const { return stages_; }
  const std::vector<FlowEdge>& edges() const { return edges_; }
  const std::vector<std::string>& order() const { return order_; }
  const std::map<StoreRef, Bucket>& stores() const { return stores_; }
  const Bucket* bucket(const std::string& provider, const std::string& name) const;
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const std::vector<StageError>& errors() const { return errors_; }

  std::uint64_t items_created() const { return created_; }
  std::size_t items_queued() const;
  /// created = delivered + queued + errored.
  bool conserved() const;

 private:
  Flow();

  Stage& stage(const std::string& name);
  void emit(Stage& s, FlowItem item, std::vector<SimEvent>& events);
  void fail(Stage& s, FlowItem item, const std::string& message,
            std::vector<SimEvent>& events);
  void fire(Stage& s, std::vector<SimEvent>& events);
  void fire_copy(Stage& s, std::vector<SimEvent>& events);
  std::optional<Bytes> apply(Stage& s, const FlowItem& item, std::string& error);

  std::vector<Stage> stages_;
  std::map<std::string, std::size_t> stage_index_;
  std::vector<std::string> order_;
  std::vector<FlowEdge> edges_;
  std::map<StoreRef, Bucket> stores_;
  std::map<std::string, Transform> functions_;
  std::map<std::string, BlockMetrics> metrics_;
  // Pending new-object events per consumer stage.
  std::map<std::string, std::deque<std::pair<std::string, Bytes>>> pending_;
  // Last copied version per (copy stage, key).
  std::map<std::string, std::map<std::string, std::uint64_t>> copied_;
  std::multimap<std::int64_t, Injection> injections_;
  std::vector<Delivery> deliveries_;
  std::vector<StageError> errors_;
  std::int64_t clock_ = 0;
  std::uint64_t created_ = 0;
  std::uint64_t next_id_ = 1;
  std::uint64_t version_ = 0;
};

}  // namespace toscadata
