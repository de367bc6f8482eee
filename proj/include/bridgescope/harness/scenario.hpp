#pragma once

#include <string>
#include <vector>

#include "bridgescope/backend.hpp"

namespace bs::harness {

// One scripted agent intent. The runner translates intents into concrete tool
// calls per toolset mode, so the same script is replayed fairly against both.
struct Step {
    enum class Kind {
        Context,   // retrieve the schema
        Object,    // retrieve one object's detail   args: {"object": name}
        Sql,       // run one SQL statement          action + sql
        Begin,
        Commit,
        Rollback,
        Value,     // fuzzy value lookup             args: {table, column, key, k}
        Pipeline,  // composed tool chain            args: a proxy request doc
        Finish,    // declare the task done
    };
    Kind kind = Kind::Finish;
    std::string action;  // Sql: which action tool the statement belongs to
    std::string sql;     // Sql
    json args;           // Object / Value / Pipeline
};

struct Scenario {
    std::string name;
    std::string user;
    std::string task_kind;  // "read" | "write" | "pipeline" | "txn"
    std::string fixture;    // "chain_store" | "housing"
    json policy;            // optional security policy document (null = none)
    std::vector<Step> steps;
    std::string expect;     // "completed" | "aborted" | "blocked"
};

Scenario parse_scenario(const json& doc);
Scenario load_scenario(const std::string& path);

// All *.json files in the directory, sorted by filename.
std::vector<Scenario> load_scenario_dir(const std::string& dir);

}  // namespace bs::harness
