#include "toscadata/verifier.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "toscadata/catalog.hpp"
#include "toscadata/cron.hpp"

namespace toscadata {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::error: return "error";
    case Severity::fixable: return "fixable";
    case Severity::warning: return "warning";
  }
  return "?";
}

std::string_view to_string(Locality l) { return l == Locality::local ? "local" : "remote"; }

namespace {

bool subtype(const TypeSystem& types, const std::string& a, const std::string& b) {
  try {
    return types.is_subtype(a, b);
  } catch (const Error&) {
    return false;
  }
}

const ResolvedType* resolved_of(const TypeSystem& types, const NodeTemplate& node) {
  try {
    return &types.resolve(node.type);
  } catch (const Error&) {
    return nullptr;
  }
}

bool is_pipeline(const TypeSystem& types, const NodeTemplate& node) {
  return subtype(types, node.type, names::kDataPipeline);
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::string occurrences_text(const Occurrences& occ) {
  return "[" + std::to_string(occ.min) + ", " +
         (occ.unbounded() ? std::string("UNBOUNDED")
                          : std::to_string(std::get<std::uint32_t>(occ.max))) +
         "]";
}

std::optional<Locality> kind_of(const TypeSystem& types, const std::string& relationship) {
  if (subtype(types, relationship, names::kConnectNifiLocal)) return Locality::local;
  if (subtype(types, relationship, names::kConnectNifiRemote)) return Locality::remote;
  return std::nullopt;
}

bool is_connection_requirement(const TypeSystem& types, const RequirementDefinition& req) {
  return subtype(types, req.capability_type, names::kConnectToPipeline);
}

/// First connection requirement on the type whose declared relationship has `kind`.
const RequirementDefinition* counterpart(const TypeSystem& types, const ResolvedType& r,
                                         Locality kind) {
  for (const auto& req : r.requirements)
    if (is_connection_requirement(types, req) && kind_of(types, req.relationship_type) == kind)
      return &req;
  return nullptr;
}

/// Diagnostic plus the mutation that repairs it (fixable findings only).
struct Finding {
  Diagnostic diagnostic;
  std::function<void(ServiceTemplate&, std::mt19937_64&)> repair;
};

Diagnostic make(const char* rule, Severity sev, std::vector<std::string> nodes,
                std::string message) {
  return Diagnostic{rule, sev, std::move(nodes), std::move(message), std::nullopt};
}

// ---------------------------------------------------------------------------
// R1 / R5

const CapabilityDefinition* first_compatible_capability(const TypeSystem& types,
                                                        const ResolvedType& target,
                                                        const RequirementDefinition& req,
                                                        const std::string& source_type,
                                                        bool* any_type_match) {
  *any_type_match = false;
  for (const auto& [_, cap] : target.capabilities) {
    if (!subtype(types, cap.capability_type, req.capability_type)) continue;
    *any_type_match = true;
    bool admitted = cap.valid_source_types.empty() ||
                    std::any_of(cap.valid_source_types.begin(), cap.valid_source_types.end(),
                                [&](const auto& v) { return subtype(types, source_type, v); });
    if (admitted) return &cap;
  }
  return nullptr;
}

std::vector<Finding> requirement_findings(const ServiceTemplate& t, const TypeSystem& types) {
  std::vector<Finding> out;
  // (target, capability name) -> accepted incoming assignments
  std::map<std::pair<std::string, std::string>, std::size_t> incoming;

  for (const auto& [sname, source] : t.node_templates) {
    const ResolvedType* sr = resolved_of(types, source);
    if (!sr) {
      out.push_back({make(rules::kReqMatch, Severity::error, {sname},
                          "type '" + source.type + "' does not resolve"),
                     {}});
      continue;
    }
    const bool pipeline = is_pipeline(types, source);
    for (const auto& a : source.requirements) {
      std::vector<std::string> pair{sname, a.target};
      const RequirementDefinition* req = sr->find_requirement(a.requirement);
      if (!req) {
        out.push_back({make(rules::kReqMatch, Severity::error, pair,
                            "type '" + short_type_name(source.type) + "' has no requirement '" +
                                a.requirement + "'"),
                       {}});
        continue;
      }
      auto target_it = t.node_templates.find(a.target);
      if (target_it == t.node_templates.end()) {
        out.push_back({make(rules::kReqMatch, Severity::error, pair,
                            "requirement '" + a.requirement + "' targets unknown template '" +
                                a.target + "'"),
                       {}});
        continue;
      }
      const NodeTemplate& target = target_it->second;
      const ResolvedType* tr = resolved_of(types, target);
      if (!tr) continue;  // reported for the target itself

      if (!subtype(types, target.type, req->node_type)) {
        bool hosting = pipeline && a.requirement == names::kHostRequirement;
        out.push_back({make(hosting ? rules::kHosting : rules::kReqMatch, Severity::error, pair,
                            hosting ? "pipeline '" + sname + "' must be hosted on a " +
                                          short_type_name(req->node_type) + ", not on '" +
                                          a.target + "' (" + short_type_name(target.type) + ")"
                                    : "target '" + a.target + "' of requirement '" +
                                          a.requirement + "' is not a " +
                                          short_type_name(req->node_type)),
                       {}});
        continue;
      }
      std::string relationship = a.relationship.value_or(req->relationship_type);
      if (!subtype(types, relationship, req->relationship_type)) {
        out.push_back({make(rules::kReqMatch, Severity::error, pair,
                            "relationship '" + relationship + "' of requirement '" +
                                a.requirement + "' is not a " +
                                short_type_name(req->relationship_type)),
                       {}});
        continue;
      }
      bool any_type_match = false;
      const CapabilityDefinition* cap =
          first_compatible_capability(types, *tr, *req, source.type, &any_type_match);
      if (!any_type_match) {
        out.push_back({make(rules::kReqMatch, Severity::error, pair,
                            "'" + a.target + "' (" + short_type_name(target.type) +
                                ") offers no " + short_type_name(req->capability_type) +
                                " capability"),
                       {}});
        continue;
      }
      if (!cap) {
        out.push_back({make(rules::kReqMatch, Severity::error, pair,
                            "'" + short_type_name(source.type) +
                                "' is not a valid source type for the capabilities of '" +
                                a.target + "'"),
                       {}});
        continue;
      }
      ++incoming[{a.target, cap->name}];
    }

    // Occurrence bounds. Minimums apply jointly to requirements sharing a
    // capability type, so local and remote connections stand in for each other.
    std::map<std::string, std::size_t> counts;
    for (const auto& a : source.requirements) ++counts[a.requirement];
    std::map<std::string, std::pair<std::size_t, std::uint32_t>> groups;
    std::vector<std::string> group_order;
    for (const auto& req : sr->requirements) {
      auto [it, inserted] =
          groups.try_emplace(req.capability_type, std::size_t{0}, req.occurrences.min);
      if (inserted) group_order.push_back(req.capability_type);
      it->second.first += counts[req.name];
      it->second.second = std::min(it->second.second, req.occurrences.min);
      if (!req.occurrences.unbounded() &&
          counts[req.name] > std::get<std::uint32_t>(req.occurrences.max)) {
        out.push_back({make(rules::kReqMatch, Severity::error, {sname},
                            "requirement '" + req.name + "' is assigned " +
                                std::to_string(counts[req.name]) +
                                " times, exceeding occurrences " +
                                occurrences_text(req.occurrences)),
                       {}});
      }
    }
    for (const auto& cap_type : group_order) {
      auto [count, min] = groups[cap_type];
      if (count < min) {
        std::vector<std::string> names;
        for (const auto& req : sr->requirements)
          if (req.capability_type == cap_type) names.push_back(req.name);
        out.push_back({make(rules::kReqMatch, Severity::error, {sname},
                            "requirement " + join(names, " or ") + " needs at least " +
                                std::to_string(min) + " assignment(s), found " +
                                std::to_string(count)),
                       {}});
      }
    }
  }

  for (const auto& [key, count] : incoming) {
    const auto& [tname, cname] = key;
    const ResolvedType* tr = resolved_of(types, t.node(tname));
    const auto& cap = tr->capabilities.at(cname);
    if (!cap.occurrences.unbounded() && count > std::get<std::uint32_t>(cap.occurrences.max))
      out.push_back({make(rules::kReqMatch, Severity::error, {tname},
                          "capability '" + cname + "' accepts at most " +
                              std::to_string(std::get<std::uint32_t>(cap.occurrences.max)) +
                              " connection(s), found " + std::to_string(count)),
                     {}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// R2 / R3

std::vector<Finding> locality_findings(const ServiceTemplate& t, const TypeSystem& types) {
  std::vector<Finding> out;
  std::map<std::pair<std::string, std::string>, std::vector<Connection>> by_pair;
  std::vector<std::pair<std::string, std::string>> order;
  for (auto& c : connections(t, types)) {
    if (!c.kind) continue;
    const auto& s = t.node(c.source);
    auto target = t.node_templates.find(c.target);
    if (target == t.node_templates.end() || !is_pipeline(types, s) ||
        !is_pipeline(types, target->second))
      continue;
    auto key = std::make_pair(c.source, c.target);
    if (!by_pair.contains(key)) order.push_back(key);
    by_pair[key].push_back(std::move(c));
  }

  for (const auto& key : order) {
    const auto& [sname, tname] = key;
    Locality want;
    try {
      want = colocated(sname, tname, t, types);
    } catch (const Error&) {
      continue;
    }
    const auto& edges = by_pair[key];
    const ResolvedType& sr = types.resolve(t.node(sname).type);
    const RequirementDefinition* proper = counterpart(types, sr, want);
    std::string placement = want == Locality::local ? "share a Nifi host" : "are on different Nifi hosts";

    if (edges.size() > 1) {
      auto keep = std::find_if(edges.begin(), edges.end(),
                               [&](const Connection& c) { return *c.kind == want; });
      std::string message = std::to_string(edges.size()) + " connections from '" + sname +
                            "' to '" + tname + "'; the nodes " + placement;
      if (keep == edges.end() && !proper) {
        out.push_back({make(rules::kDuplicateConn, Severity::error, {sname, tname},
                            message + " and '" + short_type_name(sr.name) + "' has no " +
                                std::string(to_string(want)) + " connection requirement"),
                       {}});
        continue;
      }
      Finding f{make(rules::kDuplicateConn, Severity::fixable, {sname, tname}, message), {}};
      const auto& source_reqs = t.node(sname).requirements;
      std::vector<RequirementAssignment> edge_values;
      for (const auto& c : edges) edge_values.push_back(source_reqs[c.index]);
      auto is_edge = [edge_values, tname](const RequirementAssignment& a) {
        return a.target == tname &&
               std::find(edge_values.begin(), edge_values.end(), a) != edge_values.end();
      };
      if (keep != edges.end()) {
        RequirementAssignment kept = source_reqs[keep->index];
        f.diagnostic.fix = "kept the " + keep->relationship + " connection, removed " +
                           std::to_string(edges.size() - 1) + " other(s)";
        f.repair = [sname, kept, is_edge](ServiceTemplate& tt, std::mt19937_64&) {
          auto& reqs = tt.node(sname).requirements;
          std::vector<RequirementAssignment> next;
          bool kept_one = false;
          for (const auto& a : reqs) {
            if (!is_edge(a)) {
              next.push_back(a);
            } else if (a == kept && !kept_one) {
              kept_one = true;
              next.push_back(a);
            }
          }
          reqs = std::move(next);
        };
      } else {
        std::string req_name = proper->name;
        f.diagnostic.fix = "replaced all with a single '" + req_name + "' (" +
                           proper->relationship_type + ") connection";
        f.repair = [sname, tname, req_name, is_edge](ServiceTemplate& tt, std::mt19937_64&) {
          auto& reqs = tt.node(sname).requirements;
          std::vector<RequirementAssignment> next;
          bool inserted = false;
          for (const auto& a : reqs) {
            if (!is_edge(a)) {
              next.push_back(a);
            } else if (!inserted) {
              inserted = true;
              next.push_back({req_name, tname, std::nullopt});
            }
          }
          reqs = std::move(next);
        };
      }
      out.push_back(std::move(f));
      continue;
    }

    const Connection& c = edges.front();
    if (*c.kind == want) continue;
    std::string message = "'" + sname + "' and '" + tname + "' " + placement + " but are joined by " +
                          c.relationship;
    if (!proper) {
      out.push_back({make(rules::kLocality, Severity::error, {sname, tname},
                          message + "; '" + short_type_name(sr.name) + "' has no " +
                              std::string(to_string(want)) + " connection requirement"),
                     {}});
      continue;
    }
    Finding f{make(rules::kLocality, Severity::fixable, {sname, tname}, message), {}};
    std::string req_name = proper->name;
    RequirementAssignment wrong = t.node(sname).requirements[c.index];
    f.diagnostic.fix = "rewrote the connection as '" + req_name + "' (" +
                       proper->relationship_type + ")";
    f.repair = [sname, wrong, req_name](ServiceTemplate& tt, std::mt19937_64&) {
      auto& reqs = tt.node(sname).requirements;
      auto it = std::find(reqs.begin(), reqs.end(), wrong);
      if (it == reqs.end()) return;
      it->requirement = req_name;
      it->relationship.reset();
    };
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// R4

std::string passphrase_of(const NodeTemplate& node, const ServiceTemplate& t,
                          const TypeSystem& types) {
  try {
    return to_display(property_value(node, "passphrase", t, types));
  } catch (const Error&) {
    return {};
  }
}

std::vector<Finding> encryption_findings(const ServiceTemplate& t, const TypeSystem& types) {
  std::vector<Finding> out;
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& c : connections(t, types))
    if (t.has_node(c.target)) adj[c.source].insert(c.target);

  std::vector<std::string> encrypts, decrypts;
  for (const auto& [name, node] : t.node_templates) {
    if (subtype(types, node.type, names::kEncrypt)) encrypts.push_back(name);
    if (subtype(types, node.type, names::kDecrypt)) decrypts.push_back(name);
  }
  if (encrypts.empty() && decrypts.empty()) return out;

  auto reach = [&](const std::string& from) {
    std::set<std::string> seen;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      for (const auto& next : adj[cur])
        if (seen.insert(next).second) stack.push_back(next);
    }
    return seen;
  };

  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::string> reached_decrypts;
  for (const auto& e : encrypts) {
    auto seen = reach(e);
    bool any = false;
    for (const auto& d : decrypts) {
      if (!seen.contains(d)) continue;
      any = true;
      pairs.emplace_back(e, d);
      reached_decrypts.insert(d);
    }
    if (!any)
      out.push_back({make(rules::kEncryption, Severity::error, {e},
                          "Encrypt node '" + e + "' reaches no Decrypt node"),
                     {}});
  }
  for (const auto& d : decrypts)
    if (!reached_decrypts.contains(d))
      out.push_back({make(rules::kEncryption, Severity::error, {d},
                          "Decrypt node '" + d + "' is not reachable from any Encrypt node"),
                     {}});

  // Components of the Encrypt/Decrypt pairing graph share one passphrase.
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return parent[x] = x;
    return it->second = find(it->second);
  };
  for (const auto& [e, d] : pairs) {
    auto a = find(e), b = find(d);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [e, d] : pairs) {
    members[find(e)];
  }
  for (auto& [x, _] : parent) members[find(x)].push_back(x);
  for (auto& [_, m] : members) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }

  std::set<std::string> repaired_components;
  for (const auto& [e, d] : pairs) {
    std::string pe = passphrase_of(t.node(e), t, types);
    std::string pd = passphrase_of(t.node(d), t, types);
    if (pe == pd && !pe.empty()) continue;
    std::string why = pe.empty() || pd.empty() ? "an empty passphrase" : "different passphrases";
    Finding f{make(rules::kEncryption, Severity::fixable, {e, d},
                   "Encrypt '" + e + "' and Decrypt '" + d + "' have " + why),
              {}};
    std::string root = find(e);
    const auto& group = members[root];
    f.diagnostic.fix = "assigned one fresh passphrase to " + join(group);
    if (repaired_components.insert(root).second) {
      f.repair = [group](ServiceTemplate& tt, std::mt19937_64& rng) {
        std::string pass = generate_passphrase(rng);
        for (const auto& n : group) tt.node(n).properties["passphrase"] = Value{pass};
      };
    }
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// R6

std::vector<Finding> scheduling_findings(const ServiceTemplate& t, const TypeSystem& types) {
  std::vector<Finding> out;
  for (const auto& [name, node] : t.node_templates) {
    if (!is_pipeline(types, node)) continue;
    const ResolvedType* r = resolved_of(types, node);
    if (!r) continue;
    auto value = [&](const char* prop) -> std::optional<std::string> {
      if (!r->find_property(prop)) return std::nullopt;
      try {
        return to_display(property_value(node, prop, t, types));
      } catch (const Error& e) {
        return std::string("\x01") + e.what();
      }
    };
    auto bad = [&](const std::string& message) {
      out.push_back({make(rules::kScheduling, Severity::error, {name}, message), {}});
    };
    auto strategy = value(names::kSchedulingStrategy);
    auto cron = value(names::kSchedulingPeriodCron);
    auto check_cron = [&](const char* context) {
      if (!cron) {
        bad(std::string("'") + name + "' " + context + " but has no " +
            names::kSchedulingPeriodCron + " property");
      } else if (!cron->empty() && cron->front() == '\x01') {
        bad("cannot evaluate " + std::string(names::kSchedulingPeriodCron) + " of '" + name +
            "': " + cron->substr(1));
      } else if (!is_valid_cron(*cron)) {
        bad("'" + name + "' has invalid cron expression '" + *cron + "'");
      }
    };
    if (strategy) {
      if (!strategy->empty() && strategy->front() == '\x01') {
        bad("cannot evaluate " + std::string(names::kSchedulingStrategy) + " of '" + name +
            "': " + strategy->substr(1));
      } else if (*strategy != names::kEventDriven && *strategy != names::kCronDriven) {
        bad("'" + name + "' has scheduling strategy '" + *strategy + "'; expected " +
            names::kEventDriven + " or " + names::kCronDriven);
      } else if (*strategy == names::kCronDriven) {
        check_cron("is CRON_DRIVEN");
      }
    } else if (subtype(types, node.type, names::kStandalone)) {
      check_cron("supports only CRON scheduling");
    }
  }
  return out;
}

std::vector<Diagnostic> strip(std::vector<Finding> findings) {
  std::vector<Diagnostic> out;
  out.reserve(findings.size());
  for (auto& f : findings) {
    f.diagnostic.fix.reset();
    out.push_back(std::move(f.diagnostic));
  }
  return out;
}

std::vector<Finding> all_findings(const ServiceTemplate& t, const TypeSystem& types) {
  std::vector<Finding> out = requirement_findings(t, types);
  for (auto* check : {&locality_findings, &encryption_findings, &scheduling_findings})
    for (auto& f : (*check)(t, types)) out.push_back(std::move(f));
  std::stable_sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
    return a.diagnostic.rule.substr(0, 2) < b.diagnostic.rule.substr(0, 2);
  });
  return out;
}

}  // namespace

std::vector<std::string> host_chain(const std::string& node, const ServiceTemplate& t,
                                    const TypeSystem& types) {
  std::vector<std::string> chain{node};
  std::set<std::string> seen{node};
  const NodeTemplate* cur = &t.node(node);
  while (true) {
    auto host = std::find_if(cur->requirements.begin(), cur->requirements.end(),
                             [](const auto& a) { return a.requirement == names::kHostRequirement; });
    if (host == cur->requirements.end()) {
      const ResolvedType* r = resolved_of(types, *cur);
      const RequirementDefinition* req = r ? r->find_requirement(names::kHostRequirement) : nullptr;
      if (req && req->occurrences.min >= 1)
        throw Error(ErrorCode::MissingHost, "'" + cur->name + "' has no host assigned",
                    cur->location);
      return chain;
    }
    if (!seen.insert(host->target).second)
      throw Error(ErrorCode::HostCycle,
                  "host chain of '" + node + "' loops back to '" + host->target + "'",
                  cur->location);
    chain.push_back(host->target);
    cur = &t.node(host->target);
  }
}

std::vector<std::string> host_chain(const std::string& node, const ServiceTemplate& t) {
  return host_chain(node, t, TypeSystem::for_template(t));
}

std::string nifi_host(const std::string& node, const ServiceTemplate& t,
                      const TypeSystem& types) {
  const auto& n = t.node(node);
  if (!is_pipeline(types, n))
    throw Error(ErrorCode::NotAPipeline, "'" + node + "' is not a data pipeline node",
                n.location);
  auto chain = host_chain(node, t, types);
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (subtype(types, t.node(chain[i]).type, names::kNifi)) return chain[i];
  throw Error(ErrorCode::MissingHost, "'" + node + "' is not hosted on any Nifi", n.location);
}

Locality colocated(const std::string& a, const std::string& b, const ServiceTemplate& t,
                   const TypeSystem& types) {
  return nifi_host(a, t, types) == nifi_host(b, t, types) ? Locality::local : Locality::remote;
}

Locality colocated(const std::string& a, const std::string& b, const ServiceTemplate& t) {
  return colocated(a, b, t, TypeSystem::for_template(t));
}

std::vector<Connection> connections(const ServiceTemplate& t, const TypeSystem& types) {
  std::vector<Connection> out;
  for (const auto& [name, node] : t.node_templates) {
    const ResolvedType* r = resolved_of(types, node);
    if (!r) continue;
    for (std::size_t i = 0; i < node.requirements.size(); ++i) {
      const auto& a = node.requirements[i];
      const RequirementDefinition* req = r->find_requirement(a.requirement);
      if (!req || !is_connection_requirement(types, *req)) continue;
      Connection c;
      c.source = name;
      c.target = a.target;
      c.index = i;
      c.relationship = a.relationship.value_or(req->relationship_type);
      c.kind = kind_of(types, c.relationship);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string generate_passphrase(std::mt19937_64& rng) {
  char buf[33];
  unsigned long long hi = rng(), lo = rng();
  std::snprintf(buf, sizeof buf, "%016llx%016llx", hi, lo);
  return std::string(buf, 32);
}

std::vector<Diagnostic> check_requirements(const ServiceTemplate& t, const TypeSystem& types) {
  return strip(requirement_findings(t, types));
}

std::vector<Diagnostic> check_locality(const ServiceTemplate& t, const TypeSystem& types) {
  return strip(locality_findings(t, types));
}

std::vector<Diagnostic> check_encryption(const ServiceTemplate& t, const TypeSystem& types) {
  return strip(encryption_findings(t, types));
}

std::vector<Diagnostic> check_scheduling(const ServiceTemplate& t, const TypeSystem& types) {
  return strip(scheduling_findings(t, types));
}

bool VerifyResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const auto& d) { return d.severity == Severity::error; });
}

bool VerifyResult::has_problems() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) {
    return d.severity == Severity::error || (d.severity == Severity::fixable && !d.fix);
  });
}

VerifyResult verify(const ServiceTemplate& t, const VerifyOptions& options) {
  TypeSystem types = TypeSystem::for_template(t);
  VerifyResult result;
  result.verified = t;
  if (!options.fix) {
    result.diagnostics = strip(all_findings(t, types));
    return result;
  }

  std::mt19937_64 rng(options.seed ? *options.seed : std::random_device{}());
  std::vector<Diagnostic> applied;
  for (int pass = 1;; ++pass) {
    auto findings = all_findings(result.verified, types);
    bool any_fixable = std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
      return f.diagnostic.severity == Severity::fixable;
    });
    if (!any_fixable) {
      result.diagnostics = std::move(applied);
      for (auto& d : strip(std::move(findings))) result.diagnostics.push_back(std::move(d));
      std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                       [](const Diagnostic& a, const Diagnostic& b) {
                         return a.rule.substr(0, 2) < b.rule.substr(0, 2);
                       });
      return result;
    }
    if (pass == kMaxVerifyPasses)
      throw Error(ErrorCode::VerifierNonConvergence,
                  "fixable diagnostics remain after " + std::to_string(kMaxVerifyPasses) +
                      " verifier passes");
    for (auto& f : findings) {
      if (f.diagnostic.severity != Severity::fixable) continue;
      if (f.repair) f.repair(result.verified, rng);
      applied.push_back(std::move(f.diagnostic));
    }
    result.fixed = true;
  }
}

std::string report_json(const VerifyResult& result) {
  nlohmann::ordered_json diags = nlohmann::ordered_json::array();
  for (const auto& d : result.diagnostics) {
    nlohmann::ordered_json j;
    j["rule"] = d.rule;
    j["severity"] = std::string(to_string(d.severity));
    j["nodes"] = d.nodes;
    j["message"] = d.message;
    j["fix"] = d.fix ? nlohmann::ordered_json(*d.fix) : nlohmann::ordered_json(nullptr);
    diags.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["diagnostics"] = std::move(diags);
  doc["fixed"] = result.fixed;
  return doc.dump(2) + "\n";
}

std::string report_text(const VerifyResult& result) {
  std::ostringstream os;
  for (const auto& d : result.diagnostics) {
    os << d.rule << '\t' << to_string(d.severity) << '\t' << join(d.nodes, ",") << '\t'
       << d.message;
    if (d.fix) os << " [fixed: " << *d.fix << "]";
    os << '\n';
  }
  return os.str();
}

}  // namespace toscadata
