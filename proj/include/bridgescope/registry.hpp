#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bridgescope/backend.hpp"
#include "bridgescope/session.hpp"

namespace bs {

enum class RiskClass { Read, Write, Ddl, Txn, Meta };

const char* risk_class_name(RiskClass r);

struct ToolDescriptor {
    std::string name;
    std::string description;
    json input_schema;  // JSON-schema style: {"properties": {...}, "required": [...]}
    RiskClass risk_class = RiskClass::Meta;

    json to_json() const;
};

// Handler receives the session and the argument document, returns the result
// payload. Failures are thrown as ToolError.
using ToolHandler = std::function<json(Session&, const json&)>;

enum class ToolsetMode {
    FineGrained,     // full BridgeScope toolset
    CoarseBaseline,  // get_schema + execute_sql only (the PG-MCP-style control)
};

// Tool registry and dispatch core. Exposure is computed per session from its
// privileges and policy; unexposed tools are never listed and calling one is
// indistinguishable from calling a nonexistent tool.
class ToolRegistry {
public:
    ToolRegistry(std::shared_ptr<Backend> backend, ServerConfig config,
                 ToolsetMode mode = ToolsetMode::FineGrained);

    std::shared_ptr<Session> open_session(const std::string& user,
                                          SecurityPolicy policy = {});

    // External (domain-specific) tools become callable directly and usable as
    // proxy producers or consumers. Throws DuplicateName.
    void register_external_tool(const ToolDescriptor& descriptor, ToolHandler handler);

    std::vector<ToolDescriptor> list_tools(Session& session) const;

    // Dispatch; throws ToolError (UnknownTool for unexposed or nonexistent
    // names, MalformedArgs, or the tool's own error).
    json call_tool(Session& session, const std::string& name, const json& args);

    bool is_exposed(Session& session, const std::string& name) const;
    const ToolDescriptor* find_descriptor(const std::string& name) const;

    const ServerConfig& config() const { return config_; }
    ToolsetMode mode() const { return mode_; }

private:
    struct Entry {
        ToolDescriptor descriptor;
        ToolHandler handler;
        bool external = false;
    };

    std::shared_ptr<Backend> backend_;
    ServerConfig config_;
    ToolsetMode mode_;
    std::vector<std::string> order_;  // registration order, for stable listings
    std::map<std::string, Entry> tools_;
    std::uint64_t next_session_ = 1;

    void add_builtin(ToolDescriptor descriptor, ToolHandler handler);
    void register_fine_grained_tools();
    void register_coarse_tools();
};

}  // namespace bs
