#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bs {

// Top-level statement actions. BEGIN/COMMIT/ROLLBACK are recognized by the
// analyzer but never appear in access requirements; they have dedicated tools.
enum class Action {
    Select,
    Insert,
    Update,
    Delete,
    Create,
    Drop,
    Alter,
    Truncate,
    Begin,
    Commit,
    Rollback,
    Other,
};

// Actions that can appear in privilege grants and access requirements.
inline constexpr Action kDataActions[] = {
    Action::Select, Action::Insert, Action::Update, Action::Delete,
    Action::Create, Action::Drop,   Action::Alter,  Action::Truncate,
};

inline constexpr bool is_data_action(Action a) {
    switch (a) {
    case Action::Select:
    case Action::Insert:
    case Action::Update:
    case Action::Delete:
    case Action::Create:
    case Action::Drop:
    case Action::Alter:
    case Action::Truncate:
        return true;
    default:
        return false;
    }
}

inline constexpr bool is_write_action(Action a) {
    return is_data_action(a) && a != Action::Select;
}

const char* action_name(Action a);
std::optional<Action> action_from_name(const std::string& name);

enum class ObjectKind { Table, View, Sequence, Unknown };

const char* object_kind_name(ObjectKind k);

// A named database object. Names are stored case-normalized (the analyzer
// folds unquoted identifiers per dialect rules before constructing one).
// Identity is (schema, name); kind is descriptive metadata.
struct ObjectRef {
    std::string schema;  // empty = unqualified
    std::string name;
    ObjectKind kind = ObjectKind::Unknown;

    std::string qualified_name() const {
        return schema.empty() ? name : schema + "." + name;
    }

    friend bool operator==(const ObjectRef& a, const ObjectRef& b) {
        return a.schema == b.schema && a.name == b.name;
    }
    friend std::strong_ordering operator<=>(const ObjectRef& a, const ObjectRef& b) {
        if (auto c = a.schema <=> b.schema; c != 0) return c;
        return a.name <=> b.name;
    }
};

struct AccessRequirement {
    ObjectRef object;
    Action action = Action::Select;  // always a data action

    friend bool operator==(const AccessRequirement&, const AccessRequirement&) = default;
    friend std::strong_ordering operator<=>(const AccessRequirement& a,
                                            const AccessRequirement& b) {
        if (auto c = a.object <=> b.object; c != 0) return c;
        return static_cast<int>(a.action) <=> static_cast<int>(b.action);
    }
};

struct ParsedStatement {
    std::string raw_text;
    Action action = Action::Other;
    std::set<AccessRequirement> requirements;
};

}  // namespace bs
