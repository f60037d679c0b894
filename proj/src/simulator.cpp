#include "toscadata/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <queue>
#include <set>
#include <sstream>

#include "toscadata/catalog.hpp"
#include "toscadata/cipher.hpp"
#include "toscadata/verifier.hpp"

namespace toscadata {

namespace builtin {

Bytes grayscale(const Bytes& in) {
  Bytes out(in.size());
  std::transform(in.begin(), in.end(), out.begin(), [](std::uint8_t b) { return b / 2; });
  return out;
}

Bytes blur(const Bytes& in) {
  Bytes out(in.size());
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    unsigned left = in[i == 0 ? 0 : i - 1];
    unsigned right = in[i + 1 < n ? i + 1 : n - 1];
    out[i] = static_cast<std::uint8_t>((left + in[i] + right) / 3);
  }
  return out;
}

Bytes run_length_encode(const Bytes& in) {
  Bytes out;
  for (std::size_t i = 0; i < in.size();) {
    std::size_t run = 1;
    while (i + run < in.size() && in[i + run] == in[i] && run < 255) ++run;
    out.push_back(static_cast<std::uint8_t>(run));
    out.push_back(in[i]);
    i += run;
  }
  return out;
}

}  // namespace builtin

std::uint64_t Metrics::total_errors() const {
  std::uint64_t n = 0;
  for (const auto& [_, m] : per_block) n += m.errors;
  return n;
}

std::string metrics_json(const Metrics& m) {
  nlohmann::ordered_json blocks = nlohmann::ordered_json::object();
  for (const auto& [name, b] : m.per_block)
    blocks[name] = {{"consumed", b.consumed}, {"emitted", b.emitted}, {"errors", b.errors}};
  nlohmann::ordered_json stores = nlohmann::ordered_json::object();
  for (const auto& [label, count] : m.stores) stores[label] = count;
  nlohmann::ordered_json doc;
  doc["per_block"] = std::move(blocks);
  doc["stores"] = std::move(stores);
  doc["final_tick"] = m.final_tick;
  return doc.dump(2) + "\n";
}

namespace {

Bytes parse_hex(const std::string& hex, std::size_t line) {
  if (hex.size() % 2)
    throw Error(ErrorCode::ScheduleSyntax,
                "line " + std::to_string(line) + ": odd number of hex digits");
  Bytes out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    auto digit = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw Error(ErrorCode::ScheduleSyntax,
                  "line " + std::to_string(line) + ": bad hex digit '" + std::string(1, c) + "'");
    };
    out.push_back(static_cast<std::uint8_t>(digit(hex[i]) * 16 + digit(hex[i + 1])));
  }
  return out;
}

}  // namespace

std::vector<Injection> parse_schedule(const std::string& text,
                                      const std::filesystem::path& base) {
  std::vector<Injection> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string x; fields >> x;) f.push_back(x);
    if (f.empty()) continue;
    if (f.size() != 5)
      throw Error(ErrorCode::ScheduleSyntax,
                  "line " + std::to_string(n) +
                      ": expected <tick> <provider> <bucket> <key> <payload>");
    Injection inj;
    try {
      std::size_t used = 0;
      inj.tick = std::stoll(f[0], &used);
      if (used != f[0].size() || inj.tick < 0) throw std::invalid_argument("tick");
    } catch (const std::exception&) {
      throw Error(ErrorCode::ScheduleSyntax,
                  "line " + std::to_string(n) + ": bad tick '" + f[0] + "'");
    }
    inj.store = {f[1], f[2]};
    inj.key = f[3];
    if (f[4].starts_with("0x") || f[4].starts_with("0X")) {
      inj.payload = parse_hex(f[4].substr(2), n);
    } else {
      std::filesystem::path p = base / f[4];
      std::ifstream file(p, std::ios::binary);
      if (!file)
        throw Error(ErrorCode::ScheduleSyntax,
                    "line " + std::to_string(n) + ": cannot read payload file '" + p.string() + "'");
      inj.payload.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    out.push_back(std::move(inj));
  }
  return out;
}

namespace {

struct Binding {
  const char* type;
  StageKind kind;
  const char* provider;
  const char* property;
};

// Most specific first; user types derived from a leaf inherit its behavior.
const Binding kBindings[] = {
    {names::kConsS3Bucket, StageKind::consumer, "s3", "BucketName"},
    {names::kConsGCSBucket, StageKind::consumer, "gcs", "bucket"},
    {names::kConsMinIO, StageKind::consumer, "minio", "BucketName"},
    {names::kConsAzureBlob, StageKind::consumer, "azure", "container_name"},
    {names::kConsFTP, StageKind::consumer, "ftp", "remote_path"},
    {names::kConsSFTP, StageKind::consumer, "sftp", "remote_path"},
    {names::kConsMqTT, StageKind::consumer, "mqtt", "topic"},
    {names::kConsumeLocal, StageKind::consumer, "local", "directory"},
    {names::kPubsS3Bucket, StageKind::publisher, "s3", "BucketName"},
    {names::kPubGCS, StageKind::publisher, "gcs", "BucketName"},
    {names::kPubsMinIO, StageKind::publisher, "minio", "BucketName"},
    {names::kPubsAzureBlob, StageKind::publisher, "azure", "container_name"},
    {names::kPubsSFTP, StageKind::publisher, "sftp", "remote_path"},
    {names::kPubsMQTT, StageKind::publisher, "mqtt", "topic"},
    {names::kPublishLocal, StageKind::publisher, "local", "directory"},
    {names::kInvokeLambda, StageKind::function, nullptr, "function_name"},
    {names::kInvokeOpenFaaS, StageKind::function, nullptr, "function_name"},
    {names::kInvokeFaaSFunction, StageKind::function, nullptr, "function_URL"},
    {names::kInvokeImageFaaSFunction, StageKind::function, nullptr, "function_URL"},
    {names::kExecuteCommand, StageKind::function, nullptr, "script_path"},
    {names::kExecutePython, StageKind::function, nullptr, "script_path"},
    {names::kExecuteRuby, StageKind::function, nullptr, "script_path"},
    {names::kEncrypt, StageKind::encrypt, nullptr, "passphrase"},
    {names::kDecrypt, StageKind::decrypt, nullptr, "passphrase"},
    {names::kRouteToRemote, StageKind::route, nullptr, "route_predicate"},
};

bool subtype(const TypeSystem& types, const std::string& a, const std::string& b) {
  try {
    return types.is_subtype(a, b);
  } catch (const Error&) {
    return false;
  }
}

std::vector<RouteRule> parse_routes(const std::string& text, const NodeTemplate& node) {
  std::vector<RouteRule> out;
  std::istringstream in(text);
  std::string rule;
  while (std::getline(in, rule, ';')) {
    rule.erase(0, rule.find_first_not_of(' '));
    rule.erase(rule.find_last_not_of(' ') + 1);
    if (rule.empty()) continue;
    auto eq = rule.find('=');
    auto arrow = rule.find("->");
    if (eq == std::string::npos || arrow == std::string::npos || arrow < eq)
      throw Error(ErrorCode::SchemaError,
                  "route rule '" + rule + "' of '" + node.name +
                      "' is not of the form attr=value->target",
                  node.location);
    out.push_back({rule.substr(0, eq), rule.substr(eq + 1, arrow - eq - 1),
                   rule.substr(arrow + 2)});
  }
  return out;
}

}  // namespace

Flow::Flow() {
  functions_[builtin::kGrayscale] = builtin::grayscale;
  functions_[builtin::kBlur] = builtin::blur;
  functions_[builtin::kCompress] = builtin::run_length_encode;
}

Flow Flow::instantiate(const ServiceTemplate& t) {
  TypeSystem types = TypeSystem::for_template(t);
  Flow flow;
  auto text = [&](const NodeTemplate& n, const std::string& prop) {
    return to_display(property_value(n, prop, t, types));
  };

  for (const auto& [name, node] : t.node_templates) {
    if (!subtype(types, node.type, names::kDataPipeline)) continue;
    Stage s;
    s.name = name;
    s.type = node.type;
    const ResolvedType& r = types.resolve(node.type);

    auto copy_store = [&](const char* provider, const char* prop) {
      return StoreRef{provider, text(node, prop)};
    };
    if (subtype(types, node.type, names::kAWSCopyS3ToS3)) {
      s.kind = StageKind::aws_copy;
      s.store = copy_store("s3", "source_bucket");
      s.destination = copy_store("s3", "destination_bucket");
    } else if (subtype(types, node.type, names::kAWSCopyDynamodbToS3)) {
      s.kind = StageKind::aws_copy;
      s.store = copy_store("dynamodb", "table_name");
      s.destination = copy_store("s3", "destination_bucket");
    } else if (subtype(types, node.type, names::kAWSCopyS3ToDynamodb)) {
      s.kind = StageKind::aws_copy;
      s.store = copy_store("s3", "source_bucket");
      s.destination = copy_store("dynamodb", "table_name");
    } else {
      const Binding* b = nullptr;
      for (const auto& candidate : kBindings)
        if (subtype(types, node.type, candidate.type)) {
          b = &candidate;
          break;
        }
      if (!b)
        throw Error(ErrorCode::UnsupportedType,
                    "no simulation behavior for '" + name + "' of type '" + node.type + "'",
                    node.location);
      s.kind = b->kind;
      std::string value = r.find_property(b->property) ? text(node, b->property) : "";
      switch (b->kind) {
        case StageKind::consumer:
        case StageKind::publisher:
          s.store = StoreRef{b->provider, value};
          break;
        case StageKind::function:
          s.function_key = value;
          break;
        case StageKind::encrypt:
        case StageKind::decrypt:
          s.passphrase = value;
          break;
        case StageKind::route:
          s.routes = parse_routes(value, node);
          break;
        case StageKind::aws_copy:
          break;
      }
    }

    if (r.find_property(names::kSchedulingStrategy)) {
      if (text(node, names::kSchedulingStrategy) == names::kCronDriven)
        s.cron = parse_cron(text(node, names::kSchedulingPeriodCron));
    } else if (r.find_property(names::kSchedulingPeriodCron)) {
      s.cron = parse_cron(text(node, names::kSchedulingPeriodCron));
    }
    flow.stage_index_[name] = flow.stages_.size();
    flow.metrics_[name];
    flow.stages_.push_back(std::move(s));
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& c : connections(t, types)) {
    if (!flow.stage_index_.contains(c.source) || !flow.stage_index_.contains(c.target)) continue;
    if (!seen.emplace(c.source, c.target).second) continue;
    std::size_t e = flow.edges_.size();
    flow.edges_.push_back({c.source, c.target, {}});
    flow.stage(c.source).outputs.push_back(e);
    flow.stage(c.target).inputs.push_back(e);
  }

  // Topological firing order, ties by name; stages left in a cycle follow by name.
  std::map<std::string, std::size_t> indegree;
  for (const auto& s : flow.stages_) indegree[s.name] = s.inputs.size();
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [n, d] : indegree)
    if (d == 0) ready.push(n);
  std::set<std::string> placed;
  while (!ready.empty()) {
    std::string n = ready.top();
    ready.pop();
    placed.insert(n);
    flow.order_.push_back(n);
    for (std::size_t e : flow.stage(n).outputs)
      if (--indegree[flow.edges_[e].to] == 0) ready.push(flow.edges_[e].to);
  }
  for (const auto& [n, _] : indegree)
    if (!placed.contains(n)) flow.order_.push_back(n);
  return flow;
}

Stage& Flow::stage(const std::string& name) { return stages_[stage_index_.at(name)]; }

void Flow::register_function(const std::string& name, Transform transform) {
  if (name.empty()) throw Error(ErrorCode::SchemaError, "function name must not be empty");
  if (functions_.contains(name))
    throw Error(ErrorCode::DuplicateFunction, "function '" + name + "' is already registered");
  functions_[name] = std::move(transform);
}

void Flow::put_object(const std::string& provider, const std::string& bucket,
                      const std::string& key, Bytes payload) {
  StoreRef ref{provider, bucket};
  for (const auto& s : stages_)
    if (s.kind == StageKind::consumer && s.store == ref) pending_[s.name].emplace_back(key, payload);
  stores_[ref][key] = StoredObject{std::move(payload), ++version_};
}

void Flow::schedule(Injection injection) {
  std::int64_t at = injection.tick;
  injections_.emplace(at, std::move(injection));
}

void Flow::schedule(const std::vector<Injection>& injections) {
  for (const auto& i : injections) schedule(i);
}

const Bucket* Flow::bucket(const std::string& provider, const std::string& name) const {
  auto it = stores_.find(StoreRef{provider, name});
  return it == stores_.end() ? nullptr : &it->second;
}

std::size_t Flow::items_queued() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.queue.size();
  return n;
}

bool Flow::conserved() const {
  return created_ == deliveries_.size() + items_queued() + errors_.size();
}

void Flow::emit(Stage& s, FlowItem item, std::vector<SimEvent>& events) {
  if (s.outputs.empty()) {
    fail(s, std::move(item), "'" + s.name + "' has no outgoing connection", events);
    return;
  }
  created_ += s.outputs.size() - 1;
  for (std::size_t i = 0; i < s.outputs.size(); ++i) {
    FlowItem copy = i + 1 == s.outputs.size() ? std::move(item) : item;
    if (i > 0) copy.id = next_id_++;
    FlowEdge& e = edges_[s.outputs[i]];
    events.push_back({clock_, s.name, SimEvent::Kind::emitted, copy.id, e.to});
    ++metrics_[s.name].emitted;
    e.queue.push_back(std::move(copy));
  }
}

void Flow::fail(Stage& s, FlowItem item, const std::string& message,
                std::vector<SimEvent>& events) {
  ++metrics_[s.name].errors;
  events.push_back({clock_, s.name, SimEvent::Kind::error, item.id, message});
  errors_.push_back({std::move(item), s.name, message, clock_});
}

std::optional<Bytes> Flow::apply(Stage& s, const FlowItem& item, std::string& error) {
  switch (s.kind) {
    case StageKind::function: {
      auto fn = functions_.find(s.function_key);
      if (fn == functions_.end()) {
        error = "no function registered as '" + s.function_key + "'";
        return std::nullopt;
      }
      return fn->second(item.payload);
    }
    case StageKind::encrypt:
      return encrypt_bytes(item.payload, s.passphrase);
    case StageKind::decrypt:
      return decrypt_bytes(item.payload, s.passphrase);
    default:
      return item.payload;
  }
}

void Flow::fire_copy(Stage& s, std::vector<SimEvent>& events) {
  auto src = stores_.find(*s.store);
  if (src == stores_.end()) return;
  std::vector<std::pair<std::string, Bytes>> changed;
  auto& done = copied_[s.name];
  for (const auto& [key, obj] : src->second) {
    if (done[key] >= obj.version) continue;
    done[key] = obj.version;
    changed.emplace_back(key, obj.data);
  }
  for (auto& [key, data] : changed) {
    ++metrics_[s.name].consumed;
    ++metrics_[s.name].emitted;
    events.push_back({clock_, s.name, SimEvent::Kind::copied, 0,
                      s.store->label() + "/" + key + " -> " + s.destination->label()});
    put_object(s.destination->provider, s.destination->bucket, key, std::move(data));
  }
}

void Flow::fire(Stage& s, std::vector<SimEvent>& events) {
  if (s.cron && !s.cron->matches(clock_)) return;
  if (s.kind == StageKind::aws_copy) {
    fire_copy(s, events);
    return;
  }

  std::vector<FlowItem> batch;
  if (s.kind == StageKind::consumer) {
    auto& pending = pending_[s.name];
    while (!pending.empty()) {
      auto [key, data] = std::move(pending.front());
      pending.pop_front();
      FlowItem item;
      item.id = next_id_++;
      item.payload = std::move(data);
      item.attributes = {{"source.provider", s.store->provider},
                         {"source.bucket", s.store->bucket},
                         {"key", key}};
      ++created_;
      batch.push_back(std::move(item));
    }
  }
  for (std::size_t e : s.inputs) {
    auto& q = edges_[e].queue;
    while (!q.empty()) {
      batch.push_back(std::move(q.front()));
      q.pop_front();
    }
  }

  for (auto& item : batch) {
    ++metrics_[s.name].consumed;
    events.push_back({clock_, s.name, SimEvent::Kind::consumed, item.id, ""});
    item.trail.push_back({s.name, clock_});

    if (s.kind == StageKind::publisher) {
      std::string key = item.attributes.contains("key") ? item.attributes.at("key")
                                                        : "item-" + std::to_string(item.id);
      ++metrics_[s.name].emitted;
      events.push_back({clock_, s.name, SimEvent::Kind::delivered, item.id,
                        s.store->label() + "/" + key});
      Bytes data = item.payload;
      deliveries_.push_back({std::move(item), s.name, *s.store, key, clock_});
      put_object(s.store->provider, s.store->bucket, key, std::move(data));
      continue;
    }

    if (s.kind == StageKind::route) {
      const RouteRule* hit = nullptr;
      for (const auto& rule : s.routes) {
        auto it = item.attributes.find(rule.attribute);
        if (it != item.attributes.end() && it->second == rule.value) {
          hit = &rule;
          break;
        }
      }
      auto out = hit ? std::find_if(s.outputs.begin(), s.outputs.end(),
                                    [&](std::size_t e) { return edges_[e].to == hit->target; })
                     : s.outputs.end();
      if (out == s.outputs.end()) {
        fail(s, std::move(item),
             hit ? "route target '" + hit->target + "' is not connected"
                 : "no route matches the item",
             events);
        continue;
      }
      FlowEdge& e = edges_[*out];
      ++metrics_[s.name].emitted;
      events.push_back({clock_, s.name, SimEvent::Kind::emitted, item.id, e.to});
      e.queue.push_back(std::move(item));
      continue;
    }

    std::string error;
    auto result = apply(s, item, error);
    if (!result) {
      fail(s, std::move(item), error, events);
      continue;
    }
    item.payload = std::move(*result);
    emit(s, std::move(item), events);
  }
}

std::vector<SimEvent> Flow::tick() {
  std::vector<SimEvent> events;
  auto [begin, end] = injections_.equal_range(clock_);
  std::vector<Injection> due;
  for (auto it = begin; it != end; ++it) due.push_back(it->second);
  injections_.erase(begin, end);
  for (auto& inj : due)
    put_object(inj.store.provider, inj.store.bucket, inj.key, std::move(inj.payload));

  for (const auto& name : order_) fire(stage(name), events);
  ++clock_;
  return events;
}

Metrics Flow::run_until(std::int64_t t_end) {
  // Injections scheduled in the past would never fire; apply them now.
  for (auto it = injections_.begin(); it != injections_.end() && it->first < clock_;) {
    put_object(it->second.store.provider, it->second.store.bucket, it->second.key,
               it->second.payload);
    it = injections_.erase(it);
  }
  while (clock_ <= t_end) tick();
  return metrics();
}

Metrics Flow::metrics() const {
  Metrics m;
  m.per_block = metrics_;
  for (const auto& [ref, bucket] : stores_) m.stores[ref.label()] = bucket.size();
  m.final_tick = clock_ == 0 ? 0 : clock_ - 1;
  return m;
}

}  // namespace toscadata
