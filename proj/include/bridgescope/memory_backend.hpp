#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "bridgescope/backend.hpp"

namespace bs {

// Self-contained reference backend: a private SQLite database (WAL journal,
// one sqlite connection per session connection) plus its own GRANT table,
// since SQLite has no user privileges of its own. Supports the SQL subset
// the fixtures and tool layer need: CRUD, joins, constraints, transactions.
//
// The user named `superuser` (default "root") bypasses privilege checks and
// is the only one allowed to run GRANT statements.
class MemoryBackend : public Backend {
public:
    explicit MemoryBackend(std::string superuser = "root",
                           std::chrono::milliseconds statement_timeout =
                               std::chrono::milliseconds(30000));
    ~MemoryBackend() override;

    MemoryBackend(const MemoryBackend&) = delete;
    MemoryBackend& operator=(const MemoryBackend&) = delete;

    std::unique_ptr<Connection> connect(const std::string& user) override;

    const std::string& superuser() const { return superuser_; }

private:
    friend class MemoryConnection;

    struct Grants {
        std::mutex mutex;
        // user -> privilege set
        std::unordered_map<std::string, PrivilegeSet> by_user;
    };

    std::string db_path_;
    std::string superuser_;
    std::chrono::milliseconds statement_timeout_;
    std::shared_ptr<Grants> grants_;
};

}  // namespace bs
