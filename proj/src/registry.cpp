#include "bridgescope/registry.hpp"

#include <algorithm>
#include <cctype>

#include "bridgescope/context_tools.hpp"
#include "bridgescope/errors.hpp"
#include "bridgescope/exec_tools.hpp"
#include "bridgescope/proxy.hpp"

namespace bs {
namespace {

std::string fold(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

ObjectRef object_from_wire(const std::string& name) {
    ObjectRef o;
    std::string folded = fold(name);
    size_t dot = folded.find('.');
    if (dot != std::string::npos) {
        o.schema = folded.substr(0, dot);
        o.name = folded.substr(dot + 1);
    } else {
        o.name = folded;
    }
    if (o.name.empty())
        throw ToolError(errc::malformed_args, "object name must be non-empty");
    return o;
}

json sql_schema() {
    return json{{"properties", {{"sql", {{"type", "string"}}}}},
                {"required", json::array({"sql"})}};
}

json empty_schema() {
    return json{{"properties", json::object()}, {"required", json::array()}};
}

std::string require_string(const json& args, const char* key) {
    if (!args.contains(key) || !args[key].is_string())
        throw ToolError(errc::malformed_args,
                        std::string("argument \"") + key + "\" must be a string");
    return args[key].get<std::string>();
}

json exec_result_payload(Action action, const ExecResult& result) {
    if (action == Action::Select || result.kind == ExecResult::Kind::Rows)
        return result.rows;
    return json{{"affected", result.affected}};
}

}  // namespace

const char* risk_class_name(RiskClass r) {
    switch (r) {
    case RiskClass::Read: return "read";
    case RiskClass::Write: return "write";
    case RiskClass::Ddl: return "ddl";
    case RiskClass::Txn: return "txn";
    case RiskClass::Meta: return "meta";
    }
    return "meta";
}

json ToolDescriptor::to_json() const {
    return json{{"name", name},
                {"description", description},
                {"input_schema", input_schema},
                {"risk_class", risk_class_name(risk_class)}};
}

ToolRegistry::ToolRegistry(std::shared_ptr<Backend> backend, ServerConfig config,
                           ToolsetMode mode)
    : backend_(std::move(backend)), config_(config), mode_(mode) {
    if (mode_ == ToolsetMode::FineGrained)
        register_fine_grained_tools();
    else
        register_coarse_tools();
}

std::shared_ptr<Session> ToolRegistry::open_session(const std::string& user,
                                                    SecurityPolicy policy) {
    std::string id = "s" + std::to_string(next_session_++);
    return std::make_shared<Session>(id, user, backend_->connect(user),
                                     std::move(policy));
}

void ToolRegistry::add_builtin(ToolDescriptor descriptor, ToolHandler handler) {
    std::string name = descriptor.name;
    order_.push_back(name);
    tools_[name] = Entry{std::move(descriptor), std::move(handler), false};
}

void ToolRegistry::register_external_tool(const ToolDescriptor& descriptor,
                                          ToolHandler handler) {
    if (tools_.count(descriptor.name))
        throw ToolError(errc::duplicate_name,
                        "tool \"" + descriptor.name + "\" is already registered");
    order_.push_back(descriptor.name);
    tools_[descriptor.name] = Entry{descriptor, std::move(handler), true};
}

bool ToolRegistry::is_exposed(Session& session, const std::string& name) const {
    auto it = tools_.find(name);
    if (it == tools_.end()) return false;
    if (it->second.external) return true;
    if (mode_ == ToolsetMode::CoarseBaseline) return true;
    if (name == "get_schema" || name == "get_object" || name == "get_value" ||
        name == "proxy")
        return true;
    if (name == "begin") return session.exposed().count(Action::Begin) > 0;
    if (name == "commit") return session.exposed().count(Action::Commit) > 0;
    if (name == "rollback") return session.exposed().count(Action::Rollback) > 0;
    if (auto action = action_from_name(name))
        return session.exposed().count(*action) > 0;
    return false;
}

const ToolDescriptor* ToolRegistry::find_descriptor(const std::string& name) const {
    auto it = tools_.find(name);
    return it == tools_.end() ? nullptr : &it->second.descriptor;
}

std::vector<ToolDescriptor> ToolRegistry::list_tools(Session& session) const {
    std::vector<ToolDescriptor> out;
    for (const std::string& name : order_)
        if (is_exposed(session, name)) out.push_back(tools_.at(name).descriptor);
    return out;
}

json ToolRegistry::call_tool(Session& session, const std::string& name, const json& args) {
    auto it = tools_.find(name);
    // unexposed and nonexistent are deliberately indistinguishable
    if (it == tools_.end() || !is_exposed(session, name))
        throw ToolError(errc::unknown_tool, "unknown tool \"" + name + "\"");
    if (!args.is_null() && !args.is_object())
        throw ToolError(errc::malformed_args, "tool arguments must be an object");
    try {
        return it->second.handler(session, args.is_null() ? json::object() : args);
    } catch (const ToolError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ToolError(errc::malformed_args, e.what());
    }
}

void ToolRegistry::register_fine_grained_tools() {
    add_builtin(
        {"get_schema", "Return the database schema visible to this session.",
         empty_schema(), RiskClass::Read},
        [this](Session& s, const json&) { return get_schema(s, config_).to_json(); });

    add_builtin(
        {"get_object", "Return one object's detailed, privilege-annotated schema.",
         json{{"properties", {{"object", {{"type", "string"}}}}},
              {"required", json::array({"object"})}},
         RiskClass::Read},
        [](Session& s, const json& args) {
            ObjectRef o = object_from_wire(require_string(args, "object"));
            return json{{"object", o.qualified_name()}, {"detail", get_object(s, o)}};
        });

    add_builtin(
        {"get_value",
         "Return the top-k column values most similar to a task-specific key.",
         json{{"properties",
               {{"table", {{"type", "string"}}},
                {"column", {{"type", "string"}}},
                {"key", {{"type", "string"}}},
                {"k", {{"type", "integer"}}}}},
              {"required", json::array({"table", "column", "key", "k"})}},
         RiskClass::Read},
        [this](Session& s, const json& args) {
            ColumnRef col;
            col.relation = object_from_wire(require_string(args, "table"));
            col.column = fold(require_string(args, "column"));
            if (!args.contains("k") || !args["k"].is_number_integer() ||
                args["k"].get<std::int64_t>() < 1)
                throw ToolError(errc::malformed_args, "k must be a positive integer");
            ValueMatches matches =
                get_value(s, col, require_string(args, "key"),
                          static_cast<std::size_t>(args["k"].get<std::int64_t>()),
                          config_);
            json out;
            out["matches"] = json::array();
            for (const ValueMatch& m : matches.matches)
                out["matches"].push_back({{"value", m.value}, {"score", m.score}});
            out["domain_truncated"] = matches.domain_truncated;
            return out;
        });

    struct ActionTool {
        Action action;
        const char* name;
        const char* description;
        RiskClass risk;
    };
    static const ActionTool kActionTools[] = {
        {Action::Select, "select", "Execute a single SELECT statement.", RiskClass::Read},
        {Action::Insert, "insert", "Execute a single INSERT statement.", RiskClass::Write},
        {Action::Update, "update", "Execute a single UPDATE statement.", RiskClass::Write},
        {Action::Delete, "delete", "Execute a single DELETE statement.", RiskClass::Write},
        {Action::Create, "create", "Execute a single CREATE statement.", RiskClass::Ddl},
        {Action::Drop, "drop", "Execute a single DROP statement.", RiskClass::Ddl},
        {Action::Alter, "alter", "Execute a single ALTER statement.", RiskClass::Ddl},
        {Action::Truncate, "truncate", "Execute a single TRUNCATE statement.",
         RiskClass::Write},
    };
    for (const ActionTool& t : kActionTools) {
        Action action = t.action;
        add_builtin({t.name, t.description, sql_schema(), t.risk},
                    [action](Session& s, const json& args) {
                        ExecResult r =
                            run_action_tool(s, action, require_string(args, "sql"));
                        return exec_result_payload(action, r);
                    });
    }

    add_builtin({"begin", "Begin a new transaction.", empty_schema(), RiskClass::Txn},
                [](Session& s, const json&) {
                    txn_begin_tool(s);
                    return json{{"ok", true}};
                });
    add_builtin({"commit", "Commit the current transaction.", empty_schema(),
                 RiskClass::Txn},
                [](Session& s, const json&) {
                    txn_commit_tool(s);
                    return json{{"ok", true}};
                });
    add_builtin({"rollback", "Roll back the current transaction.", empty_schema(),
                 RiskClass::Txn},
                [](Session& s, const json&) {
                    txn_rollback_tool(s);
                    return json{{"ok", true}};
                });

    add_builtin(
        {"proxy",
         "Execute target_tool with arguments produced by other tools, routing "
         "data directly between them.",
         json{{"properties",
               {{"target_tool", {{"type", "string"}}},
                {"tool_args", {{"type", "object"}}}}},
              {"required", json::array({"target_tool"})}},
         RiskClass::Meta},
        [this](Session& s, const json& args) {
            PlannedUnit unit = plan_proxy(*this, s, args);
            return execute_proxy(*this, s, unit);
        });
}

void ToolRegistry::register_coarse_tools() {
    // PG-MCP-style control: one generic execution tool, schema without
    // annotations or filtering. Engine-native checks still apply.
    add_builtin({"get_schema", "Return the full database schema.", empty_schema(),
                 RiskClass::Read},
                [](Session& s, const json&) {
                    json out;
                    out["mode"] = "full";
                    out["entries"] = json::array();
                    for (const ObjectRef& o : s.connection().list_objects()) {
                        ObjectDetail detail = s.connection().object_detail(o);
                        out["entries"].push_back(
                            {{"object", o.qualified_name()},
                             {"kind", object_kind_name(o.kind)},
                             {"body", render_object_ddl(detail)}});
                    }
                    return out;
                });
    add_builtin({"execute_sql", "Execute an arbitrary SQL statement.", sql_schema(),
                 RiskClass::Write},
                [](Session& s, const json& args) {
                    ExecResult r = s.connection().execute(require_string(args, "sql"));
                    return exec_result_payload(
                        r.kind == ExecResult::Kind::Rows ? Action::Select
                                                         : Action::Other,
                        r);
                });
}

}  // namespace bs
