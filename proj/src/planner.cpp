#include "toscadata/planner.hpp"

#include <algorithm>
#include <map>
#include <json.hpp>
#include <queue>
#include <set>
#include <sstream>

#include "toscadata/catalog.hpp"
#include "toscadata/verifier.hpp"

namespace toscadata {

std::string_view to_string(EdgeKind k) {
  return k == EdgeKind::HostedOn ? "HostedOn" : "ConnectsTo";
}

std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::create: return "create";
    case Operation::configure: return "configure";
    case Operation::start: return "start";
    case Operation::stop: return "stop";
    case Operation::del: return "delete";
  }
  return "?";
}

namespace {

bool subtype(const TypeSystem& types, const std::string& a, const std::string& b) {
  try {
    return types.is_subtype(a, b);
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::string> find_cycle(const std::set<std::string>& remaining,
                                    const std::map<std::string, std::set<std::string>>& deps) {
  // Every remaining node has a remaining dependency, so walking always revisits.
  std::vector<std::string> path;
  std::map<std::string, std::size_t> pos;
  std::string cur = *remaining.begin();
  while (!pos.contains(cur)) {
    pos[cur] = path.size();
    path.push_back(cur);
    const auto& next = deps.at(cur);
    auto it = std::find_if(next.begin(), next.end(),
                           [&](const auto& n) { return remaining.contains(n); });
    cur = *it;
  }
  return {path.begin() + static_cast<std::ptrdiff_t>(pos[cur]), path.end()};
}

}  // namespace

DependencyGraph build_graph(const ServiceTemplate& t, const TypeSystem& types) {
  DependencyGraph g;
  for (const auto& [name, _] : t.node_templates) g.vertices.push_back(name);
  std::set<std::tuple<std::string, std::string, EdgeKind>> seen;
  for (const auto& [name, node] : t.node_templates) {
    const ResolvedType* r = nullptr;
    try {
      r = &types.resolve(node.type);
    } catch (const Error&) {
    }
    for (const auto& a : node.requirements) {
      if (!t.has_node(a.target) || a.target == name) continue;
      std::optional<std::string> relationship = a.relationship;
      if (!relationship && r)
        if (const auto* req = r->find_requirement(a.requirement))
          relationship = req->relationship_type;
      bool hosted = a.requirement == names::kHostRequirement ||
                    (relationship && subtype(types, *relationship, names::kHostedOn));
      DependencyEdge e{name, a.target, hosted ? EdgeKind::HostedOn : EdgeKind::ConnectsTo, false};
      if (!seen.emplace(e.from, e.to, e.kind).second) continue;
      if (!hosted) {
        try {
          e.remote = colocated(name, a.target, t, types) == Locality::remote;
        } catch (const Error&) {
        }
      }
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

DependencyGraph build_graph(const ServiceTemplate& t) {
  return build_graph(t, TypeSystem::for_template(t));
}

DeploymentPlan plan(const DependencyGraph& g) {
  std::map<std::string, std::set<std::string>> deps, dependents;
  std::map<std::string, std::vector<std::string>> remote_targets;
  for (const auto& v : g.vertices) deps[v];
  for (const auto& e : g.edges) {
    deps[e.from].insert(e.to);
    dependents[e.to].insert(e.from);
    if (e.remote) remote_targets[e.from].push_back(e.to);
  }

  std::map<std::string, std::size_t> waiting;
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [v, d] : deps) {
    waiting[v] = d.size();
    if (d.empty()) ready.push(v);
  }

  DeploymentPlan p;
  std::set<std::string> done;
  while (!ready.empty()) {
    std::string v = ready.top();
    ready.pop();
    done.insert(v);
    std::optional<std::string> note;
    if (auto it = remote_targets.find(v); it != remote_targets.end()) {
      auto targets = it->second;
      std::sort(targets.begin(), targets.end());
      std::string joined;
      for (const auto& x : targets) joined += (joined.empty() ? "" : ",") + x;
      note = "remote:" + joined;
    }
    p.steps.push_back({v, Operation::create, std::nullopt});
    p.steps.push_back({v, Operation::configure, note});
    p.steps.push_back({v, Operation::start, std::nullopt});
    for (const auto& w : dependents[v])
      if (--waiting[w] == 0) ready.push(w);
  }

  if (done.size() != deps.size()) {
    std::set<std::string> remaining;
    for (const auto& [v, _] : deps)
      if (!done.contains(v)) remaining.insert(v);
    auto cycle = find_cycle(remaining, deps);
    std::string members;
    for (const auto& v : cycle) members += (members.empty() ? "" : ", ") + v;
    throw Error(ErrorCode::DependencyCycle, "dependency cycle: " + members);
  }
  return p;
}

DeploymentPlan plan(const ServiceTemplate& t) { return plan(build_graph(t)); }

DeploymentPlan undeploy_plan(const ServiceTemplate& t) {
  DeploymentPlan forward = plan(t);
  DeploymentPlan p;
  for (auto it = forward.steps.rbegin(); it != forward.steps.rend(); ++it) {
    if (it->op != Operation::start) continue;
    p.steps.push_back({it->node, Operation::stop, std::nullopt});
    p.steps.push_back({it->node, Operation::del, std::nullopt});
  }
  return p;
}

namespace {

bool validate(const DeploymentPlan& p, const std::set<std::string>& nodes,
              const std::vector<std::pair<std::string, std::string>>& deps) {
  std::map<std::string, std::map<Operation, std::size_t>> at;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    if (!nodes.contains(s.node)) return false;
    if (s.op != Operation::create && s.op != Operation::configure && s.op != Operation::start)
      return false;
    if (!at[s.node].emplace(s.op, i).second) return false;
  }
  for (const auto& n : nodes) {
    auto it = at.find(n);
    if (it == at.end() || it->second.size() != 3) return false;
    const auto& ops = it->second;
    if (!(ops.at(Operation::create) < ops.at(Operation::configure) &&
          ops.at(Operation::configure) < ops.at(Operation::start)))
      return false;
  }
  for (const auto& [from, to] : deps)
    if (!(at[to].at(Operation::start) < at[from].at(Operation::create))) return false;
  return true;
}

}  // namespace

bool validate_plan(const DeploymentPlan& p, const ServiceTemplate& t) {
  std::set<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> deps;
  for (const auto& [name, node] : t.node_templates) {
    nodes.insert(name);
    for (const auto& a : node.requirements)
      if (t.has_node(a.target) && a.target != name) deps.emplace_back(name, a.target);
  }
  return validate(p, nodes, deps);
}

bool validate_plan(const DeploymentPlan& p, const DependencyGraph& g) {
  std::set<std::string> nodes(g.vertices.begin(), g.vertices.end());
  std::vector<std::pair<std::string, std::string>> deps;
  for (const auto& e : g.edges) deps.emplace_back(e.from, e.to);
  return validate(p, nodes, deps);
}

std::string plan_json(const DeploymentPlan& p) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : p.steps) {
    nlohmann::ordered_json j;
    j["node"] = s.node;
    j["op"] = std::string(to_string(s.op));
    j["annotation"] = s.annotation ? nlohmann::ordered_json(*s.annotation)
                                   : nlohmann::ordered_json(nullptr);
    steps.push_back(std::move(j));
  }
  return steps.dump(2) + "\n";
}

std::string plan_text(const DeploymentPlan& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    os << i + 1 << '\t' << s.node << '\t' << to_string(s.op);
    if (s.annotation) os << '\t' << *s.annotation;
    os << '\n';
  }
  return os.str();
}

}  // namespace toscadata
