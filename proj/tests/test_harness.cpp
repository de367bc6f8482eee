#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "bridgescope/errors.hpp"
#include "bridgescope/harness/runner.hpp"
#include "bridgescope/harness/scenario.hpp"

using namespace bs;
using namespace bs::harness;

namespace {

std::string scenario_dir() {
    const char* dir = std::getenv("BRIDGESCOPE_SCENARIO_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

std::string parse_code(const char* text) {
    try {
        parse_scenario(json::parse(text));
    } catch (const ToolError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("the bundled scenario corpus loads and is well-formed") {
    std::vector<Scenario> all = load_scenario_dir(scenario_dir());
    REQUIRE(all.size() == 13);
    // sorted by filename -> stable order
    CHECK(all.front().name == "admin_read");
    CHECK(all.back().name == "policy_blacklist_salaries");
    for (const Scenario& sc : all) {
        CHECK_FALSE(sc.user.empty());
        CHECK((sc.fixture == "chain_store" || sc.fixture == "housing"));
        CHECK((sc.expect == "completed" || sc.expect == "aborted" ||
               sc.expect == "blocked"));
        REQUIRE_FALSE(sc.steps.empty());
        CHECK(sc.steps.back().kind == Step::Kind::Finish);
    }
}

TEST_CASE("scenario validation rejects malformed documents") {
    CHECK(parse_code(R"({"user":"u"})") == errc::scenario_error);  // no name
    CHECK(parse_code(R"({"name":"n","user":"u","task_kind":"read",
        "fixture":"chain_store","expect":"completed","steps":[]})") ==
          errc::scenario_error);  // empty script
    CHECK(parse_code(R"({"name":"n","user":"u","task_kind":"read",
        "fixture":"chain_store","expect":"completed",
        "steps":[{"kind":"context"}]})") == errc::scenario_error);  // no finish
    CHECK(parse_code(R"({"name":"n","user":"u","task_kind":"read",
        "fixture":"nowhere","expect":"completed",
        "steps":[{"kind":"finish"}]})") == errc::scenario_error);  // bad fixture
    CHECK(parse_code(R"({"name":"n","user":"u","task_kind":"read",
        "fixture":"chain_store","expect":"completed",
        "steps":[{"kind":"teleport"},{"kind":"finish"}]})") == errc::scenario_error);
    CHECK(parse_code(R"({"name":"n","user":"u","task_kind":"read",
        "fixture":"chain_store","expect":"maybe",
        "steps":[{"kind":"finish"}]})") == errc::scenario_error);
}

TEST_CASE("a feasible read runs in exactly three tool calls under the fine toolset") {
    Scenario sc = load_scenario(scenario_dir() + "/03_analyst_read.json");
    RunnerOptions opt;
    RunMetrics fine = run_scenario(sc, RunMode::FineGrained, opt);
    CHECK(fine.outcome == "completed");
    CHECK(fine.tool_calls == 3);  // context, select, finish
    CHECK(fine.sql_executions == 1);
    CHECK_FALSE(fine.aborted_before_sql);

    RunMetrics coarse = run_scenario(sc, RunMode::CoarseBaseline, opt);
    CHECK(coarse.outcome == "completed");
    CHECK(coarse.sql_executions == 1);
}

TEST_CASE("an infeasible write aborts before any SQL reaches the engine") {
    Scenario sc = load_scenario(scenario_dir() + "/04_analyst_write_denied.json");
    RunMetrics fine = run_scenario(sc, RunMode::FineGrained);
    CHECK(fine.outcome == "aborted");
    CHECK(fine.aborted_before_sql);
    CHECK(fine.sql_executions == 0);

    // the baseline has no basis to abort: it sends the statement and fails
    RunMetrics coarse = run_scenario(sc, RunMode::CoarseBaseline);
    CHECK(coarse.sql_executions >= 1);
    CHECK_FALSE(coarse.aborted_before_sql);
    CHECK(fine.agent_visible_bytes < coarse.agent_visible_bytes);
}

TEST_CASE("pipelines run server-side in fine mode, client-side in the baseline") {
    Scenario sc = load_scenario(scenario_dir() + "/08_pipeline_normalize_train.json");
    RunnerOptions opt;
    opt.housing_rows = 300;
    RunMetrics fine = run_scenario(sc, RunMode::FineGrained, opt);
    RunMetrics coarse = run_scenario(sc, RunMode::CoarseBaseline, opt);
    REQUIRE(fine.outcome == "completed");
    REQUIRE(coarse.outcome == "completed");
    CHECK(fine.tool_calls < coarse.tool_calls);
    // the baseline hauls every intermediate row set through the agent
    CHECK(coarse.agent_visible_bytes > 10 * fine.agent_visible_bytes);
}

TEST_CASE("runs are deterministic for a fixed seed") {
    Scenario sc = load_scenario(scenario_dir() + "/08_pipeline_normalize_train.json");
    RunnerOptions opt;
    opt.housing_rows = 200;
    opt.seed = 99;
    RunMetrics a = run_scenario(sc, RunMode::FineGrained, opt);
    RunMetrics b = run_scenario(sc, RunMode::FineGrained, opt);
    CHECK(a.to_json() == b.to_json());

    opt.seed = 100;  // a different data set, same outcome shape
    RunMetrics c = run_scenario(sc, RunMode::FineGrained, opt);
    CHECK(c.outcome == a.outcome);
    CHECK(c.tool_calls == a.tool_calls);
}

TEST_CASE("suite report covers every scenario under both modes") {
    std::vector<Scenario> all = load_scenario_dir(scenario_dir());
    RunnerOptions opt;
    opt.housing_rows = 120;
    json report = run_suite(all, opt);
    REQUIRE(report["scenarios"].is_array());
    REQUIRE(report["scenarios"].size() == all.size());
    CHECK(report["housing_rows"] == opt.housing_rows);
    for (size_t i = 0; i < all.size(); ++i) {
        const json& row = report["scenarios"][i];
        CHECK(row["name"] == all[i].name);
        CHECK(row["expect"] == all[i].expect);
        for (const char* mode : {"fine_grained", "coarse_baseline"}) {
            REQUIRE(row.contains(mode));
            CHECK(row[mode].contains("tool_calls"));
            CHECK(row[mode].contains("agent_visible_bytes"));
            CHECK(row[mode].contains("sql_executions"));
            CHECK(row[mode].contains("outcome"));
        }
        // the fine-grained toolset must land every scenario on its expectation
        CHECK(row["fine_grained"]["outcome"] == all[i].expect);
    }

    std::string table = render_suite_table(report);
    for (const Scenario& sc : all)
        CHECK(table.find(sc.name) != std::string::npos);
}
