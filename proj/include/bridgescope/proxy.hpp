#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bridgescope/registry.hpp"
#include "bridgescope/transform.hpp"

namespace bs {

// A validated producer node. `nested_unit` is set when the producer is the
// proxy tool itself (recursive composition).
struct PlannedProducer;

struct PlannedUnit {
    std::string consumer;
    std::vector<std::pair<std::string, PlannedProducer>> producers;  // declared order
    json literal_args = json::object();
    int execution_order = 0;  // bottom-up rank; leaves first
};

struct PlannedProducer {
    std::string tool;
    json literal_args = json::object();
    std::vector<std::pair<std::string, PlannedProducer>> producer_args;
    std::optional<PlannedUnit> nested_unit;  // when tool == "proxy"
    TransformSpec transform;
    std::string path;  // location within the request, for error reporting
    bool read_only = false;
};

// Validate a proxy request document:
//   {"target_tool": name,
//    "tool_args": {arg: <literal json> | {"literal": json} | {"producer": {...}}}}
// against the session's exposed toolset and the consumer's declared argument
// schema. Throws UnknownTool, ToolNotExposed, DepthExceeded, ArgumentMismatch
// or MalformedArgs.
PlannedUnit plan_proxy(ToolRegistry& registry, Session& session, const json& request);

// Execute bottom-up: producers first (read-only siblings may run in
// parallel when no transaction is active), each output passed through its
// transform, then the consumer once with all arguments bound. Only the
// consumer's output is returned; intermediate data never surfaces.
json execute_proxy(ToolRegistry& registry, Session& session, const PlannedUnit& unit);

}  // namespace bs
