#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "bridgescope/harness/scenario.hpp"
#include "bridgescope/session.hpp"

namespace bs::harness {

enum class RunMode { FineGrained, CoarseBaseline };

const char* run_mode_name(RunMode mode);

// What the scripted agent observed. `agent_visible_bytes` is the serialized
// size of everything that crossed into the agent: the tool listing, every tool
// result payload and every error document. Listing the tools is free; every
// other interaction (including the closing "finish") counts as a tool call.
// `sql_executions` counts only statements that reached the database engine;
// statements stopped by privilege or policy verification do not.
struct RunMetrics {
    std::size_t tool_calls = 0;
    std::size_t agent_visible_bytes = 0;
    std::size_t sql_executions = 0;
    bool aborted_before_sql = false;
    std::string outcome;  // "completed" | "aborted" | "blocked"

    json to_json() const;
};

struct RunnerOptions {
    std::size_t housing_rows = 5000;
    std::uint64_t seed = 42;
    std::chrono::milliseconds producer_delay{0};
    ServerConfig server;
};

RunMetrics run_scenario(const Scenario& scenario, RunMode mode,
                        const RunnerOptions& options = {});

// Runs every scenario under both toolset modes; deterministic report.
json run_suite(const std::vector<Scenario>& scenarios,
               const RunnerOptions& options = {});

std::string render_suite_table(const json& report);

}  // namespace bs::harness
