#include "bridgescope/types.hpp"

#include <algorithm>
#include <cctype>

namespace bs {

const char* action_name(Action a) {
    switch (a) {
    case Action::Select: return "SELECT";
    case Action::Insert: return "INSERT";
    case Action::Update: return "UPDATE";
    case Action::Delete: return "DELETE";
    case Action::Create: return "CREATE";
    case Action::Drop: return "DROP";
    case Action::Alter: return "ALTER";
    case Action::Truncate: return "TRUNCATE";
    case Action::Begin: return "BEGIN";
    case Action::Commit: return "COMMIT";
    case Action::Rollback: return "ROLLBACK";
    case Action::Other: return "OTHER";
    }
    return "OTHER";
}

std::optional<Action> action_from_name(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    for (Action a : {Action::Select, Action::Insert, Action::Update, Action::Delete,
                     Action::Create, Action::Drop, Action::Alter, Action::Truncate,
                     Action::Begin, Action::Commit, Action::Rollback, Action::Other}) {
        if (up == action_name(a)) return a;
    }
    return std::nullopt;
}

const char* object_kind_name(ObjectKind k) {
    switch (k) {
    case ObjectKind::Table: return "table";
    case ObjectKind::View: return "view";
    case ObjectKind::Sequence: return "sequence";
    case ObjectKind::Unknown: return "unknown";
    }
    return "unknown";
}

}  // namespace bs
