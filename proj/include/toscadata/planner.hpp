#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toscadata/model.hpp"
#include "toscadata/type_system.hpp"

namespace toscadata {

enum class EdgeKind { HostedOn, ConnectsTo };
std::string_view to_string(EdgeKind k);

/// `from` depends on `to`.
struct DependencyEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::ConnectsTo;
  bool remote = false;  // connection between different Nifi hosts

  bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
  std::vector<std::string> vertices;  // sorted
  std::vector<DependencyEdge> edges;
};

enum class Operation { create, configure, start, stop, del };
std::string_view to_string(Operation op);

struct PlanStep {
  std::string node;
  Operation op = Operation::create;
  std::optional<std::string> annotation;

  bool operator==(const PlanStep&) const = default;
};

struct DeploymentPlan {
  std::vector<PlanStep> steps;

  bool operator==(const DeploymentPlan&) const = default;
};

DependencyGraph build_graph(const ServiceTemplate& t, const TypeSystem& types);
DependencyGraph build_graph(const ServiceTemplate& t);

/// Throws Error(DependencyCycle) naming the members of one cycle.
DeploymentPlan plan(const ServiceTemplate& t);
DeploymentPlan plan(const DependencyGraph& g);

/// Reverse node order, each node stopped then deleted.
DeploymentPlan undeploy_plan(const ServiceTemplate& t);

/// Every node has create < configure < start, and every dependency target
/// is started before the dependent is created.
bool validate_plan(const DeploymentPlan& p, const ServiceTemplate& t);
bool validate_plan(const DeploymentPlan& p, const DependencyGraph& g);

std::string plan_json(const DeploymentPlan& p);
std::string plan_text(const DeploymentPlan& p);

}  // namespace toscadata
