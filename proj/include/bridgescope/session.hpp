#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "bridgescope/backend.hpp"
#include "bridgescope/privileges.hpp"

namespace bs {

// Server-wide tunables (config file schema documented in README).
struct ServerConfig {
    std::size_t schema_threshold = 100;  // full vs hierarchical get_schema cutoff
    std::size_t distinct_value_cap = 10000;
    std::size_t proxy_depth_limit = 8;
    std::chrono::milliseconds statement_timeout{30000};
};

enum class TxnState { None, Active, Failed };

// One agent's connection: identity, cached privileges (loaded once at session
// start), security policy, and transaction state. Tool calls within a session
// are serialized via exec_mutex(); the session object itself is then safe to
// share with the proxy engine's worker threads for read-only state.
class Session {
public:
    Session(std::string id, std::string user, std::unique_ptr<Connection> conn,
            SecurityPolicy policy)
        : id_(std::move(id)),
          user_(std::move(user)),
          conn_(std::move(conn)),
          policy_(std::move(policy)),
          privileges_(conn_->introspect_privileges(user_)),
          exposed_(exposed_actions(privileges_, policy_)) {}

    const std::string& id() const { return id_; }
    const std::string& user() const { return user_; }
    Connection& connection() { return *conn_; }
    const PrivilegeSet& privileges() const { return privileges_; }
    const SecurityPolicy& policy() const { return policy_; }
    const std::set<Action>& exposed() const { return exposed_; }

    TxnState txn_state() const { return txn_state_; }
    void set_txn_state(TxnState s) { txn_state_ = s; }

    std::mutex& exec_mutex() { return exec_mutex_; }

private:
    std::string id_;
    std::string user_;
    std::unique_ptr<Connection> conn_;
    SecurityPolicy policy_;
    PrivilegeSet privileges_;
    std::set<Action> exposed_;
    TxnState txn_state_ = TxnState::None;
    std::mutex exec_mutex_;
};

}  // namespace bs
