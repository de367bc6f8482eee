#include "bridgescope/exec_tools.hpp"

#include "bridgescope/errors.hpp"
#include "bridgescope/sql_analyzer.hpp"

namespace bs {

ExecResult run_action_tool(Session& session, Action tool_action, const std::string& sql) {
    ParsedStatement stmt = sql::parse(sql);
    if (stmt.action != tool_action) {
        std::string msg = std::string("the ") + action_name(tool_action) +
                          " tool only executes " + action_name(tool_action) +
                          " statements; got " + action_name(stmt.action);
        if (stmt.action == Action::Begin || stmt.action == Action::Commit ||
            stmt.action == Action::Rollback)
            msg += " (use the dedicated transaction tools)";
        throw ToolError(errc::action_mismatch, msg);
    }
    if (auto violation = verify(stmt.requirements, session.privileges(), session.policy()))
        throw ToolError(violation_code(violation->kind), violation->message);
    if (session.txn_state() == TxnState::Failed)
        throw ToolError(errc::commit_after_failure,
                        "transaction failed; only rollback is accepted");
    try {
        return session.connection().execute(sql);
    } catch (const BackendError&) {
        if (session.txn_state() == TxnState::Active)
            session.set_txn_state(TxnState::Failed);
        throw;
    }
}

void txn_begin_tool(Session& session) {
    if (session.txn_state() != TxnState::None)
        throw ToolError(errc::already_in_transaction, "a transaction is already active");
    session.connection().txn_begin();
    session.set_txn_state(TxnState::Active);
}

void txn_commit_tool(Session& session) {
    if (session.txn_state() == TxnState::None)
        throw ToolError(errc::no_active_transaction, "no active transaction");
    if (session.txn_state() == TxnState::Failed)
        throw ToolError(errc::commit_after_failure,
                        "transaction failed; only rollback is accepted");
    session.connection().txn_commit();
    session.set_txn_state(TxnState::None);
}

void txn_rollback_tool(Session& session) {
    if (session.txn_state() == TxnState::None)
        throw ToolError(errc::no_active_transaction, "no active transaction");
    session.connection().txn_rollback();
    session.set_txn_state(TxnState::None);
}

}  // namespace bs
