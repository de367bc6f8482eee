#pragma once

#include <stdexcept>
#include <string>

namespace bs {

// Stable machine-readable error codes carried on every tool-level failure.
// Documented in README.md (protocol reference).
namespace errc {
inline constexpr const char* syntax_error = "BS-SQL-000";
inline constexpr const char* action_mismatch = "BS-SQL-001";
inline constexpr const char* multi_statement = "BS-SQL-002";
inline constexpr const char* no_privilege = "BS-SEC-001";
inline constexpr const char* policy_blocked = "BS-SEC-002";
inline constexpr const char* already_in_transaction = "BS-TXN-001";
inline constexpr const char* no_active_transaction = "BS-TXN-002";
inline constexpr const char* commit_after_failure = "BS-TXN-003";
inline constexpr const char* backend_error = "BS-DB-001";
inline constexpr const char* backend_unavailable = "BS-DB-002";
inline constexpr const char* unknown_object = "BS-CTX-001";
inline constexpr const char* unknown_column = "BS-CTX-002";
inline constexpr const char* unknown_tool = "BS-RPC-001";
inline constexpr const char* malformed_args = "BS-RPC-002";
inline constexpr const char* duplicate_name = "BS-RPC-003";
inline constexpr const char* tool_not_exposed = "BS-PRX-001";
inline constexpr const char* depth_exceeded = "BS-PRX-002";
inline constexpr const char* argument_mismatch = "BS-PRX-003";
inline constexpr const char* transform_error = "BS-PRX-004";
inline constexpr const char* scenario_error = "BS-HRN-001";
}  // namespace errc

// Base for all tool-visible failures: a stable code plus a human message.
class ToolError : public std::runtime_error {
public:
    ToolError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct SyntaxError : ToolError {
    explicit SyntaxError(const std::string& m) : ToolError(errc::syntax_error, m) {}
};

struct MultiStatementError : ToolError {
    explicit MultiStatementError(const std::string& m)
        : ToolError(errc::multi_statement, m) {}
};

struct BackendError : ToolError {
    explicit BackendError(const std::string& m) : ToolError(errc::backend_error, m) {}
};

struct BackendUnavailable : ToolError {
    explicit BackendUnavailable(const std::string& m)
        : ToolError(errc::backend_unavailable, m) {}
};

struct UnknownObjectError : ToolError {
    explicit UnknownObjectError(const std::string& m)
        : ToolError(errc::unknown_object, m) {}
};

}  // namespace bs
