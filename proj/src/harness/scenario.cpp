#include "bridgescope/harness/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bridgescope/errors.hpp"

namespace bs::harness {
namespace {

Step::Kind step_kind(const std::string& name) {
    if (name == "context") return Step::Kind::Context;
    if (name == "object") return Step::Kind::Object;
    if (name == "sql") return Step::Kind::Sql;
    if (name == "begin") return Step::Kind::Begin;
    if (name == "commit") return Step::Kind::Commit;
    if (name == "rollback") return Step::Kind::Rollback;
    if (name == "value") return Step::Kind::Value;
    if (name == "pipeline") return Step::Kind::Pipeline;
    if (name == "finish") return Step::Kind::Finish;
    throw ToolError(errc::scenario_error, "unknown step kind \"" + name + "\"");
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    Scenario sc;
    try {
        sc.name = doc.at("name").get<std::string>();
        sc.user = doc.at("user").get<std::string>();
        sc.task_kind = doc.at("task_kind").get<std::string>();
        sc.fixture = doc.at("fixture").get<std::string>();
        sc.expect = doc.value("expect", std::string("completed"));
        if (sc.expect != "completed" && sc.expect != "aborted" &&
            sc.expect != "blocked")
            throw ToolError(errc::scenario_error,
                            "unknown expectation \"" + sc.expect + "\"");
        if (doc.contains("policy")) sc.policy = doc["policy"];
        for (const json& s : doc.at("steps")) {
            Step step;
            step.kind = step_kind(s.at("kind").get<std::string>());
            if (step.kind == Step::Kind::Sql) {
                step.action = s.at("action").get<std::string>();
                step.sql = s.at("sql").get<std::string>();
            } else if (s.contains("args")) {
                step.args = s["args"];
            }
            sc.steps.push_back(std::move(step));
        }
    } catch (const json::exception& e) {
        throw ToolError(errc::scenario_error,
                        std::string("malformed scenario document: ") + e.what());
    }
    if (sc.fixture != "chain_store" && sc.fixture != "housing")
        throw ToolError(errc::scenario_error, "unknown fixture \"" + sc.fixture + "\"");
    if (sc.steps.empty() || sc.steps.back().kind != Step::Kind::Finish)
        throw ToolError(errc::scenario_error,
                        "scenario \"" + sc.name + "\" must end with a finish step");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ToolError(errc::scenario_error, "cannot open scenario file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ToolError(errc::scenario_error,
                        path + ": invalid JSON: " + std::string(e.what()));
    }
    return parse_scenario(doc);
}

std::vector<Scenario> load_scenario_dir(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<Scenario> out;
    for (const std::string& p : paths) out.push_back(load_scenario(p));
    return out;
}

}  // namespace bs::harness
