#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bridgescope/errors.hpp"
#include "bridgescope/harness/fixtures.hpp"
#include "bridgescope/memory_backend.hpp"
#include "bridgescope/rpc.hpp"

using namespace bs;

namespace {

struct Fx {
    std::shared_ptr<MemoryBackend> backend = std::make_shared<MemoryBackend>();
    ToolRegistry registry;

    explicit Fx(ToolsetMode mode = ToolsetMode::FineGrained)
        : registry(backend, ServerConfig{}, mode) {
        auto root = backend->connect("root");
        apply_fixture(*root, harness::chain_store_fixture());
    }

    std::set<std::string> tool_names(Session& s) {
        std::set<std::string> out;
        for (const ToolDescriptor& d : registry.list_tools(s)) out.insert(d.name);
        return out;
    }
};

const std::set<std::string> kContext = {"get_schema", "get_object", "get_value"};
const std::set<std::string> kAllFine = {
    "get_schema", "get_object", "get_value", "select",   "insert",
    "update",     "delete",     "create",    "drop",     "alter",
    "truncate",   "begin",      "commit",    "rollback", "proxy"};

std::string call_code(ToolRegistry& r, Session& s, const std::string& name,
                      const json& args) {
    try {
        r.call_tool(s, name, args);
    } catch (const ToolError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("exposed toolsets track each role's privileges exactly") {
    Fx fx;

    auto admin = fx.registry.open_session("admin");
    CHECK(fx.tool_names(*admin) == kAllFine);

    // intern holds ALL on one table: same toolset, scoped by verification
    auto intern = fx.registry.open_session("intern");
    CHECK(fx.tool_names(*intern) == kAllFine);

    // read-only role: no write/DDL tools and no transaction tools
    auto analyst = fx.registry.open_session("analyst");
    std::set<std::string> expected = kContext;
    expected.insert("select");
    expected.insert("proxy");
    CHECK(fx.tool_names(*analyst) == expected);

    // no grants at all: context tools and proxy remain for orientation
    auto stranger = fx.registry.open_session("stranger");
    expected = kContext;
    expected.insert("proxy");
    CHECK(fx.tool_names(*stranger) == expected);
}

TEST_CASE("a policy blacklist can strip tools the grants alone would expose") {
    Fx fx;
    SecurityPolicy policy;
    policy.object_blacklist = {"office_supplies"};
    auto intern = fx.registry.open_session("intern", policy);
    // intern's only grants are on the blacklisted table
    std::set<std::string> expected = kContext;
    expected.insert("proxy");
    CHECK(fx.tool_names(*intern) == expected);
}

TEST_CASE("calling an unexposed tool is indistinguishable from a nonexistent one") {
    Fx fx;
    auto analyst = fx.registry.open_session("analyst");
    std::string unexposed_msg, absent_msg;
    try {
        fx.registry.call_tool(*analyst, "drop", json{{"sql", "DROP TABLE x"}});
    } catch (const ToolError& e) {
        CHECK(e.code() == errc::unknown_tool);
        unexposed_msg = e.what();
    }
    try {
        fx.registry.call_tool(*analyst, "qwzx", json{{"sql", "DROP TABLE x"}});
    } catch (const ToolError& e) {
        CHECK(e.code() == errc::unknown_tool);
        absent_msg = e.what();
    }
    CHECK(unexposed_msg == "unknown tool \"drop\"");
    CHECK(absent_msg == "unknown tool \"qwzx\"");

    // fuzz: whatever the session, every name outside its listing fails
    // identically, and every name inside it never yields unknown_tool
    std::mt19937 rng(7);
    std::vector<std::string> users = {"admin", "analyst", "intern", "stranger"};
    for (int trial = 0; trial < 50; ++trial) {
        auto s = fx.registry.open_session(users[rng() % users.size()]);
        auto listed = fx.tool_names(*s);
        for (const std::string& name : kAllFine) {
            std::string code = call_code(fx.registry, *s, name, json::object());
            if (listed.count(name))
                CHECK(code != errc::unknown_tool);
            else
                CHECK(code == errc::unknown_tool);
        }
    }
}

TEST_CASE("external tools: registration, exposure, duplicate rejection") {
    Fx fx;
    ToolDescriptor d;
    d.name = "echo";
    d.description = "Return the argument document unchanged.";
    d.input_schema = json{{"properties", json::object()}, {"required", json::array()}};
    d.risk_class = RiskClass::Read;
    fx.registry.register_external_tool(d, [](Session&, const json& a) { return a; });

    // exposed to everyone, even sessions with no database grants
    auto stranger = fx.registry.open_session("stranger");
    CHECK(fx.tool_names(*stranger).count("echo") == 1);
    json out = fx.registry.call_tool(*stranger, "echo", json{{"x", 1}});
    CHECK(out == json{{"x", 1}});

    try {
        fx.registry.register_external_tool(d, [](Session&, const json& a) { return a; });
        FAIL("expected duplicate_name");
    } catch (const ToolError& e) {
        CHECK(e.code() == errc::duplicate_name);
    }
    // colliding with a builtin name is equally rejected
    d.name = "select";
    CHECK_THROWS_AS(
        fx.registry.register_external_tool(d, [](Session&, const json& a) { return a; }),
        ToolError);
}

TEST_CASE("malformed argument documents are rejected before dispatch") {
    Fx fx;
    auto admin = fx.registry.open_session("admin");
    CHECK(call_code(fx.registry, *admin, "select", json("not an object")) ==
          errc::malformed_args);
    CHECK(call_code(fx.registry, *admin, "select", json::object()) ==
          errc::malformed_args);
    CHECK(call_code(fx.registry, *admin, "select", json{{"sql", 42}}) ==
          errc::malformed_args);
    CHECK(call_code(fx.registry, *admin, "get_value",
                    json{{"table", "brand_a_items"}, {"column", "category"},
                         {"key", "x"}, {"k", 0}}) == errc::malformed_args);
}

TEST_CASE("coarse baseline exposes only schema dump and raw SQL, ungated") {
    Fx fx(ToolsetMode::CoarseBaseline);
    auto analyst = fx.registry.open_session("analyst");
    CHECK(fx.tool_names(*analyst) ==
          std::set<std::string>{"get_schema", "execute_sql"});

    // the baseline performs no object-level verification of its own: a policy
    // blacklist the fine-grained toolset would enforce is simply ignored
    SecurityPolicy policy;
    policy.object_blacklist = {"salaries"};
    auto admin = fx.registry.open_session("admin", policy);
    json out = fx.registry.call_tool(*admin, "execute_sql",
                                     json{{"sql", "SELECT * FROM salaries"}});
    CHECK(out.is_array());
    CHECK_FALSE(out.empty());

    // its schema dump is likewise unfiltered
    json schema = fx.registry.call_tool(*admin, "get_schema", json::object());
    CHECK(schema.dump().find("salaries") != std::string::npos);

    // only the backend's own native grants still apply
    CHECK(call_code(fx.registry, *analyst, "execute_sql",
                    json{{"sql", "SELECT * FROM salaries"}}) != "");
}

TEST_CASE("rpc endpoint: listing, calls, and the error envelope") {
    Fx fx;
    RpcEndpoint ep(fx.registry, fx.registry.open_session("analyst"));

    json r = *ep.handle_message(json::parse(
        R"({"jsonrpc":"2.0","id":1,"method":"tools/list"})"));
    CHECK(r["jsonrpc"] == "2.0");
    CHECK(r["id"] == 1);
    CHECK(r["result"]["tools"].size() == 5);
    for (const json& tool : r["result"]["tools"]) {
        CHECK(tool.contains("name"));
        CHECK(tool.contains("description"));
        CHECK(tool.contains("input_schema"));
    }

    r = *ep.handle_message(json::parse(R"({"jsonrpc":"2.0","id":"a","method":"tools/call",
        "params":{"name":"select","arguments":{"sql":"SELECT id FROM brand_a_items ORDER BY id"}}})"));
    CHECK(r["id"] == "a");
    CHECK(r["result"]["payload"].is_array());

    // tool failures surface the stable error code in error.data
    r = *ep.handle_message(json::parse(R"({"jsonrpc":"2.0","id":2,"method":"tools/call",
        "params":{"name":"select","arguments":{"sql":"SELECT * FROM salaries"}}})"));
    CHECK(r["error"]["code"] == -32000);
    CHECK(r["error"]["data"]["error_code"] == errc::no_privilege);
}

TEST_CASE("rpc endpoint: protocol-level errors and notifications") {
    Fx fx;
    RpcEndpoint ep(fx.registry, fx.registry.open_session("admin"));

    json r = *ep.handle_message(json::parse(R"({"jsonrpc":"2.0","id":1,"method":"nope"})"));
    CHECK(r["error"]["code"] == -32601);

    r = *ep.handle_message(json::parse(R"({"id":2,"method":"tools/list"})"));
    CHECK(r["error"]["code"] == -32600);  // missing jsonrpc version

    r = *ep.handle_message(json::parse(
        R"({"jsonrpc":"2.0","id":3,"method":"tools/call","params":{}})"));
    CHECK(r["error"]["code"] == -32602);

    // notifications (no id) are never answered, even on failure
    CHECK_FALSE(ep.handle_message(
        json::parse(R"({"jsonrpc":"2.0","method":"tools/call","params":{"name":"qq"}})")));

    // unparsable lines get a parse-error reply with a null id
    auto line = ep.handle_line("{nonsense");
    REQUIRE(line.has_value());
    json parsed = json::parse(*line);
    CHECK(parsed["error"]["code"] == -32700);
    CHECK(parsed["id"].is_null());

    // blank lines are ignored
    CHECK_FALSE(ep.handle_line("   ").has_value());
}

TEST_CASE("serve_stream answers every request in order over stdio framing") {
    Fx fx;
    std::istringstream in(
        R"({"jsonrpc":"2.0","id":1,"method":"tools/list"})"
        "\n"
        R"({"jsonrpc":"2.0","id":2,"method":"tools/call","params":{"name":"get_schema","arguments":{}}})"
        "\n");
    std::ostringstream out;
    serve_stream(fx.registry, fx.registry.open_session("intern"), in, out);

    std::istringstream lines(out.str());
    std::string line;
    std::vector<json> replies;
    while (std::getline(lines, line)) replies.push_back(json::parse(line));
    REQUIRE(replies.size() == 2);
    CHECK(replies[0]["id"] == 1);
    CHECK(replies[1]["id"] == 2);
    CHECK(replies[1]["result"]["payload"]["entries"].size() == 1);
}
