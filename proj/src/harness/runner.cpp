#include "bridgescope/harness/runner.hpp"

#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include "bridgescope/errors.hpp"
#include "bridgescope/harness/analytics.hpp"
#include "bridgescope/harness/fixtures.hpp"
#include "bridgescope/memory_backend.hpp"
#include "bridgescope/registry.hpp"
#include "bridgescope/sql_analyzer.hpp"
#include "bridgescope/transform.hpp"

namespace bs::harness {
namespace {

std::string bare_name(const std::string& qualified) {
    auto dot = qualified.rfind('.');
    return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
}

// Replays one scenario script against a registry, simulating a disciplined
// agent: it reads the advertised toolset first, never calls a tool it was not
// offered, and gives up as soon as the toolset or the visible schema shows the
// task to be infeasible.
class ScriptedAgent {
public:
    ScriptedAgent(ToolRegistry& registry, Session& session, RunMode mode)
        : registry_(registry), session_(session), mode_(mode) {}

    RunMetrics run(const Scenario& scenario) {
        json listing = json::array();
        for (const ToolDescriptor& d : registry_.list_tools(session_))
            listing.push_back(d.to_json());
        metrics_.agent_visible_bytes += listing.dump().size();
        std::set<std::string> advertised;
        for (const json& d : listing) advertised.insert(d["name"].get<std::string>());

        if (mode_ == RunMode::FineGrained && !toolset_covers(scenario, advertised))
            return abort_run();

        for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
            const Step& step = scenario.steps[i];
            try {
                if (!run_step(scenario, i, step)) return metrics_;
            } catch (const ToolError& e) {
                record_error(e);
                // A statement that made it to the engine and failed there
                // still counts as an execution.
                if (step.kind == Step::Kind::Sql && e.code() == errc::backend_error)
                    metrics_.sql_executions++;
                metrics_.outcome = "blocked";
                finish();
                return metrics_;
            }
        }
        if (metrics_.outcome.empty()) metrics_.outcome = "completed";
        return metrics_;
    }

private:
    ToolRegistry& registry_;
    Session& session_;
    RunMode mode_;
    RunMetrics metrics_;
    std::set<std::string> visible_objects_;
    bool schema_seen_ = false;

    static std::string required_tool(const Step& step) {
        switch (step.kind) {
            case Step::Kind::Context: return "get_schema";
            case Step::Kind::Object: return "get_object";
            case Step::Kind::Sql: return step.action;
            case Step::Kind::Begin: return "begin";
            case Step::Kind::Commit: return "commit";
            case Step::Kind::Rollback: return "rollback";
            case Step::Kind::Value: return "get_value";
            case Step::Kind::Pipeline: return "proxy";
            case Step::Kind::Finish: return "";
        }
        return "";
    }

    static bool toolset_covers(const Scenario& scenario,
                               const std::set<std::string>& advertised) {
        for (const Step& step : scenario.steps) {
            std::string tool = required_tool(step);
            if (!tool.empty() && !advertised.count(tool)) return false;
        }
        return true;
    }

    RunMetrics abort_run() {
        metrics_.aborted_before_sql = metrics_.sql_executions == 0;
        metrics_.outcome = "aborted";
        finish();
        return metrics_;
    }

    void finish() { metrics_.tool_calls++; }

    json call(const std::string& tool, const json& args) {
        metrics_.tool_calls++;
        json payload = registry_.call_tool(session_, tool, args);
        metrics_.agent_visible_bytes += payload.dump().size();
        return payload;
    }

    void record_error(const ToolError& e) {
        json doc{{"error_code", e.code()}, {"message", e.what()}};
        metrics_.agent_visible_bytes += doc.dump().size();
    }

    // Returns false when the run is over (abort or finish).
    bool run_step(const Scenario& scenario, std::size_t index, const Step& step) {
        switch (step.kind) {
            case Step::Kind::Context: {
                json schema = call("get_schema", json::object());
                schema_seen_ = true;
                visible_objects_.clear();
                for (const json& entry : schema["entries"])
                    visible_objects_.insert(
                        bare_name(entry["object"].get<std::string>()));
                if (mode_ == RunMode::FineGrained &&
                    !upcoming_sql_feasible(scenario, index)) {
                    abort_run();
                    return false;
                }
                return true;
            }
            case Step::Kind::Object:
                if (mode_ == RunMode::FineGrained)
                    call("get_object", step.args);
                else
                    call("get_schema", json::object());
                return true;
            case Step::Kind::Sql:
                if (mode_ == RunMode::FineGrained)
                    call(step.action, json{{"sql", step.sql}});
                else
                    call("execute_sql", json{{"sql", step.sql}});
                metrics_.sql_executions++;
                return true;
            case Step::Kind::Begin:
            case Step::Kind::Commit:
            case Step::Kind::Rollback: {
                std::string verb = step.kind == Step::Kind::Begin     ? "begin"
                                   : step.kind == Step::Kind::Commit ? "commit"
                                                                     : "rollback";
                if (mode_ == RunMode::FineGrained) {
                    call(verb, json::object());
                } else {
                    std::string sql = verb == "begin"    ? "BEGIN"
                                      : verb == "commit" ? "COMMIT"
                                                         : "ROLLBACK";
                    call("execute_sql", json{{"sql", sql}});
                }
                return true;
            }
            case Step::Kind::Value:
                if (mode_ == RunMode::FineGrained) {
                    call("get_value", step.args);
                } else {
                    // No dedicated lookup tool: pull the whole distinct domain
                    // and match client-side.
                    std::string table = step.args.at("table").get<std::string>();
                    std::string column = step.args.at("column").get<std::string>();
                    call("execute_sql",
                         json{{"sql", "SELECT DISTINCT " + column + " FROM " + table +
                                          " WHERE " + column + " IS NOT NULL"}});
                    metrics_.sql_executions++;
                }
                return true;
            case Step::Kind::Pipeline:
                if (mode_ == RunMode::FineGrained)
                    call("proxy", step.args);
                else
                    interpret_unit(step.args);
                return true;
            case Step::Kind::Finish:
                finish();
                if (metrics_.outcome.empty()) metrics_.outcome = "completed";
                return false;
        }
        return true;
    }

    // With no schema in hand yet the agent cannot judge; once it has one, any
    // upcoming statement touching an object it cannot see makes the task
    // infeasible for this identity.
    bool upcoming_sql_feasible(const Scenario& scenario, std::size_t from) {
        for (std::size_t i = from; i < scenario.steps.size(); ++i) {
            const Step& step = scenario.steps[i];
            if (step.kind != Step::Kind::Sql) continue;
            ParsedStatement parsed;
            try {
                parsed = sql::parse(step.sql);
            } catch (const ToolError&) {
                continue;  // let the server report it
            }
            for (const AccessRequirement& req : parsed.requirements)
                if (!visible_objects_.count(req.object.name)) return false;
        }
        return true;
    }

    // The coarse agent has no composition tool: it evaluates the same request
    // tree itself, hauling every intermediate result through its own context.
    json interpret_unit(const json& unit) {
        json bound = json::object();
        if (unit.contains("tool_args")) {
            for (auto it = unit["tool_args"].begin(); it != unit["tool_args"].end();
                 ++it) {
                const json& v = it.value();
                if (v.is_object() && v.contains("producer"))
                    bound[it.key()] = run_producer(v["producer"]);
                else if (v.is_object() && v.contains("literal"))
                    bound[it.key()] = v["literal"];
                else
                    bound[it.key()] = v;
            }
        }
        return call_mapped(unit.at("target_tool").get<std::string>(), bound);
    }

    json run_producer(const json& producer) {
        std::string tool = producer.at("tool").get<std::string>();
        json out = tool == "proxy" ? interpret_unit(producer.value("args", json::object()))
                                   : call_mapped(tool, producer.value("args", json::object()));
        if (producer.contains("transform") && !producer["transform"].is_null())
            out = apply_transform(parse_transform(producer["transform"]),
                                  std::move(out));
        return out;
    }

    json call_mapped(const std::string& tool, const json& args) {
        if (action_from_name(tool)) {
            json payload = call("execute_sql", json{{"sql", args.at("sql")}});
            metrics_.sql_executions++;
            return payload;
        }
        return call(tool, args);
    }
};

std::shared_ptr<MemoryBackend> make_backend(const Scenario& scenario,
                                            const RunnerOptions& options) {
    auto backend = std::make_shared<MemoryBackend>("root", options.server.statement_timeout);
    Fixture fixture = scenario.fixture == "housing"
                          ? housing_fixture(options.housing_rows, options.seed)
                          : chain_store_fixture();
    auto admin = backend->connect("root");
    apply_fixture(*admin, fixture);
    return backend;
}

}  // namespace

const char* run_mode_name(RunMode mode) {
    return mode == RunMode::FineGrained ? "fine_grained" : "coarse_baseline";
}

json RunMetrics::to_json() const {
    return json{{"tool_calls", tool_calls},
                {"agent_visible_bytes", agent_visible_bytes},
                {"sql_executions", sql_executions},
                {"aborted_before_sql", aborted_before_sql},
                {"outcome", outcome}};
}

RunMetrics run_scenario(const Scenario& scenario, RunMode mode,
                        const RunnerOptions& options) {
    auto backend = make_backend(scenario, options);
    ToolRegistry registry(backend, options.server,
                          mode == RunMode::FineGrained ? ToolsetMode::FineGrained
                                                       : ToolsetMode::CoarseBaseline);
    register_analytics_tools(registry, options.producer_delay);
    SecurityPolicy policy;
    if (!scenario.policy.is_null()) policy = parse_policy(scenario.policy.dump());
    auto session = registry.open_session(scenario.user, std::move(policy));
    ScriptedAgent agent(registry, *session, mode);
    return agent.run(scenario);
}

json run_suite(const std::vector<Scenario>& scenarios, const RunnerOptions& options) {
    json report;
    report["housing_rows"] = options.housing_rows;
    report["seed"] = options.seed;
    report["scenarios"] = json::array();
    for (const Scenario& sc : scenarios) {
        json row{{"name", sc.name},
                 {"user", sc.user},
                 {"task_kind", sc.task_kind},
                 {"expect", sc.expect}};
        row["fine_grained"] = run_scenario(sc, RunMode::FineGrained, options).to_json();
        row["coarse_baseline"] =
            run_scenario(sc, RunMode::CoarseBaseline, options).to_json();
        report["scenarios"].push_back(std::move(row));
    }
    return report;
}

std::string render_suite_table(const json& report) {
    std::ostringstream out;
    out << std::left << std::setw(28) << "scenario" << std::setw(16) << "mode"
        << std::right << std::setw(7) << "calls" << std::setw(12) << "bytes"
        << std::setw(6) << "sql" << "  outcome\n";
    for (const json& row : report["scenarios"]) {
        for (const char* mode : {"fine_grained", "coarse_baseline"}) {
            const json& m = row[mode];
            out << std::left << std::setw(28) << row["name"].get<std::string>()
                << std::setw(16) << mode << std::right << std::setw(7)
                << m["tool_calls"].get<std::size_t>() << std::setw(12)
                << m["agent_visible_bytes"].get<std::size_t>() << std::setw(6)
                << m["sql_executions"].get<std::size_t>() << "  "
                << m["outcome"].get<std::string>()
                << (m["aborted_before_sql"].get<bool>() ? " (pre-SQL)" : "") << "\n";
        }
    }
    return out.str();
}

}  // namespace bs::harness
