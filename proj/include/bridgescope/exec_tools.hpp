#pragma once

#include <string>

#include "bridgescope/backend.hpp"
#include "bridgescope/session.hpp"

namespace bs {

// Body of every per-action SQL tool (select/insert/update/.../truncate):
// classify, enforce exclusivity, verify every access requirement, then
// execute. No statement reaches the backend unless verification passed.
// Writes join the active transaction if one exists, else run auto-commit.
ExecResult run_action_tool(Session& session, Action tool_action, const std::string& sql);

void txn_begin_tool(Session& session);
void txn_commit_tool(Session& session);
void txn_rollback_tool(Session& session);

}  // namespace bs
