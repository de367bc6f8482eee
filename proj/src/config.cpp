#include "bridgescope/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bridgescope/errors.hpp"

namespace bs {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

AppConfig load_app_config(const std::string& path) {
    nlohmann::json doc = nlohmann::json::parse(read_file(path));
    AppConfig config;
    config.backend_url = doc.value("backend_url", config.backend_url);
    config.user = doc.value("user", config.user);
    config.policy_file = doc.value("policy_file", config.policy_file);
    config.server.schema_threshold =
        doc.value("schema_threshold", config.server.schema_threshold);
    config.server.distinct_value_cap =
        doc.value("distinct_value_cap", config.server.distinct_value_cap);
    config.server.proxy_depth_limit =
        doc.value("proxy_depth_limit", config.server.proxy_depth_limit);
    if (doc.contains("statement_timeout_ms"))
        config.server.statement_timeout =
            std::chrono::milliseconds(doc["statement_timeout_ms"].get<std::int64_t>());
    return config;
}

AppConfig apply_env_overrides(AppConfig config) {
    if (const char* url = std::getenv("BRIDGESCOPE_BACKEND_URL")) config.backend_url = url;
    if (const char* user = std::getenv("BRIDGESCOPE_USER")) config.user = user;
    return config;
}

SecurityPolicy load_policy_file(const std::string& path) {
    return parse_policy(read_file(path));
}

}  // namespace bs
