#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "bridgescope/config.hpp"
#include "bridgescope/errors.hpp"
#include "bridgescope/harness/fixtures.hpp"
#include "bridgescope/harness/runner.hpp"
#include "bridgescope/memory_backend.hpp"
#include "bridgescope/registry.hpp"
#include "bridgescope/rpc.hpp"
#ifdef BRIDGESCOPE_HAVE_LIBPQ
#include "bridgescope/postgres_backend.hpp"
#endif

namespace {

std::shared_ptr<bs::Backend> make_backend(const bs::AppConfig& config) {
    if (config.backend_url == "memory:" || config.backend_url.rfind("memory:", 0) == 0)
        return std::make_shared<bs::MemoryBackend>("root",
                                                   config.server.statement_timeout);
#ifdef BRIDGESCOPE_HAVE_LIBPQ
    if (config.backend_url.rfind("postgres://", 0) == 0 ||
        config.backend_url.rfind("postgresql://", 0) == 0)
        return std::make_shared<bs::PostgresBackend>(config.backend_url,
                                                     config.server.statement_timeout);
#endif
    throw bs::BackendUnavailable("unsupported backend URL: " + config.backend_url);
}

bs::harness::RunMode parse_mode(const std::string& mode) {
    if (mode == "fine" || mode == "fine_grained") return bs::harness::RunMode::FineGrained;
    if (mode == "coarse" || mode == "coarse_baseline")
        return bs::harness::RunMode::CoarseBaseline;
    throw CLI::ValidationError("--mode", "expected fine or coarse");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BridgeScope: privilege-aware database tool server"};
    app.require_subcommand(1);

    // serve
    auto* serve = app.add_subcommand("serve", "Serve the tool protocol");
    std::string config_path, user_flag, backend_flag, policy_flag, mode_flag = "fine";
    std::uint16_t tcp_port = 0;
    serve->add_option("--config", config_path, "JSON config file");
    serve->add_option("--user", user_flag, "database user for the session(s)");
    serve->add_option("--backend-url", backend_flag, "memory: or postgres://...");
    serve->add_option("--policy", policy_flag, "security policy JSON file");
    serve->add_option("--mode", mode_flag, "toolset: fine (default) or coarse");
    serve->add_option("--tcp", tcp_port, "listen on a TCP port instead of stdio");

    // run
    auto* run = app.add_subcommand("run", "Replay one scenario and print metrics");
    std::string scenario_path, run_mode = "fine";
    std::size_t housing_rows = 5000;
    std::uint64_t seed = 42;
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--mode", run_mode, "fine or coarse");
    run->add_option("--rows", housing_rows, "row count for the housing fixture");
    run->add_option("--seed", seed, "fixture RNG seed");

    // suite
    auto* suite = app.add_subcommand("suite", "Replay a scenario directory, both modes");
    std::string suite_dir = "scenarios", json_out;
    suite->add_option("--dir", suite_dir, "directory of scenario JSON files");
    suite->add_option("--rows", housing_rows, "row count for the housing fixture");
    suite->add_option("--seed", seed, "fixture RNG seed");
    suite->add_option("--json", json_out, "also write the full report as JSON");

    // gen-fixtures
    auto* gen = app.add_subcommand("gen-fixtures", "Emit fixture SQL");
    std::string fixture_name = "chain_store", out_path;
    gen->add_option("--fixture", fixture_name, "chain_store or housing");
    gen->add_option("--rows", housing_rows, "row count for the housing fixture");
    gen->add_option("--seed", seed, "fixture RNG seed");
    gen->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve->parsed()) {
            bs::AppConfig config;
            if (!config_path.empty()) config = bs::load_app_config(config_path);
            config = bs::apply_env_overrides(config);
            if (!user_flag.empty()) config.user = user_flag;
            if (!backend_flag.empty()) config.backend_url = backend_flag;
            if (!policy_flag.empty()) config.policy_file = policy_flag;
            bs::SecurityPolicy policy;
            if (!config.policy_file.empty())
                policy = bs::load_policy_file(config.policy_file);
            auto backend = make_backend(config);
            bs::ToolRegistry registry(backend, config.server,
                                      parse_mode(mode_flag) ==
                                              bs::harness::RunMode::FineGrained
                                          ? bs::ToolsetMode::FineGrained
                                          : bs::ToolsetMode::CoarseBaseline);
            if (tcp_port != 0) {
                bs::serve_tcp(registry, config.user, policy, tcp_port);
            } else {
                auto session = registry.open_session(config.user, policy);
                bs::serve_stream(registry, session, std::cin, std::cout);
            }
            return 0;
        }

        bs::harness::RunnerOptions options;
        options.housing_rows = housing_rows;
        options.seed = seed;

        if (run->parsed()) {
            bs::harness::Scenario sc = bs::harness::load_scenario(scenario_path);
            bs::harness::RunMetrics m =
                bs::harness::run_scenario(sc, parse_mode(run_mode), options);
            std::cout << m.to_json().dump(2) << "\n";
            return 0;
        }

        if (suite->parsed()) {
            auto scenarios = bs::harness::load_scenario_dir(suite_dir);
            bs::json report = bs::harness::run_suite(scenarios, options);
            std::cout << bs::harness::render_suite_table(report);
            if (!json_out.empty()) {
                std::ofstream out(json_out);
                out << report.dump(2) << "\n";
            }
            return 0;
        }

        if (gen->parsed()) {
            bs::harness::Fixture fixture =
                fixture_name == "housing"
                    ? bs::harness::housing_fixture(housing_rows, seed)
                    : bs::harness::chain_store_fixture();
            std::string sql = bs::harness::fixture_to_sql(fixture);
            if (out_path.empty()) {
                std::cout << sql;
            } else {
                std::ofstream out(out_path);
                out << sql;
            }
            return 0;
        }
    } catch (const bs::ToolError& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
