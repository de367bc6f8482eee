#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "bridgescope/backend.hpp"

namespace bs {

// PostgreSQL adapter (libpq). The backend is constructed with a base
// connection string; per-session identities are assumed via SET ROLE, so the
// configured login role must be allowed to switch to every served user.
// Privileges are read from information_schema.role_table_grants, and the
// engine's own checks remain active underneath the tool layer.
class PostgresBackend : public Backend {
public:
    explicit PostgresBackend(std::string conninfo,
                             std::chrono::milliseconds statement_timeout =
                                 std::chrono::milliseconds(30000));

    std::unique_ptr<Connection> connect(const std::string& user) override;

private:
    std::string conninfo_;
    std::chrono::milliseconds statement_timeout_;
};

}  // namespace bs
