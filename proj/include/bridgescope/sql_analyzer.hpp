#pragma once

#include <string_view>

#include "bridgescope/types.hpp"

namespace bs::sql {

// Parse a single SQL statement (PostgreSQL grammar subset), classify its
// top-level action, and enumerate every (object, action) pair the statement
// requires. Throws SyntaxError for unparseable or unsupported constructs and
// MultiStatementError when the text contains more than one statement
// (never auto-split; a statement list is treated as a possible injection).
//
// Pure function; deterministic for a fixed input.
ParsedStatement parse(std::string_view sql_text);

// Same parsing rules as parse(); returns only the action.
Action classify_only(std::string_view sql_text);

}  // namespace bs::sql
