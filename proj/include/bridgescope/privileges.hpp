#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "bridgescope/types.hpp"

namespace bs {

// Database-side grants for one user: the subset of action x object pairs
// the engine allows. Only data/DDL actions appear; transaction control is
// not a grantable action.
class PrivilegeSet {
public:
    void grant(Action action, const ObjectRef& object);
    void grant_all(const ObjectRef& object);

    bool allows(Action action, const ObjectRef& object) const;
    std::set<Action> actions_on(const ObjectRef& object) const;

    // All distinct objects carrying at least one grant, sorted.
    std::vector<ObjectRef> granted_objects() const;
    // True iff some object carries a grant for this action.
    bool any_grant_for(Action action) const;

    bool empty() const { return by_object_.empty(); }

private:
    // key = qualified_name(); a grant keyed without schema also matches a
    // schema-qualified lookup of the same bare name (and vice versa).
    struct Entry {
        ObjectRef object;
        std::set<Action> actions;
    };
    std::unordered_map<std::string, Entry> by_object_;

    const Entry* find(const ObjectRef& object) const;
};

// User-side white/black lists. A policy only narrows what the grants allow;
// the blacklist wins over the whitelist on conflict.
struct SecurityPolicy {
    std::optional<std::set<std::string>> object_whitelist;  // qualified names
    std::set<std::string> object_blacklist;
    std::optional<std::set<Action>> action_whitelist;
    std::set<Action> action_blacklist;

    bool permits_object(const ObjectRef& object) const;
    bool permits_action(Action action) const;
};

// Load a policy document (JSON, schema documented in README) from text.
// Identifiers are matched case-normalized (folded to lower case).
SecurityPolicy parse_policy(const std::string& json_text);

enum class ViolationKind { NoPrivilege, PolicyBlocked, ActionMismatch };

struct Violation {
    ViolationKind kind;
    AccessRequirement requirement;
    std::string message;
};

const char* violation_code(ViolationKind kind);

// Actions for which at least one permitted object is granted. Transaction
// actions ride along whenever any write action is exposed; a read-only
// toolset has no use for begin/commit/rollback.
std::set<Action> exposed_actions(const PrivilegeSet& priv, const SecurityPolicy& policy);

// True iff some action is granted on the object and the policy permits it.
bool object_visible(const ObjectRef& object, const PrivilegeSet& priv,
                    const SecurityPolicy& policy);

// Check every requirement against grants and policy. Returns the first
// violation in sorted requirement order, or nullopt when everything passes.
std::optional<Violation> verify(const std::set<AccessRequirement>& requirements,
                                const PrivilegeSet& priv, const SecurityPolicy& policy);

// Prepend a machine-parseable grant annotation to a rendered object schema.
std::string annotate(const std::string& object_schema, const ObjectRef& object,
                     const PrivilegeSet& priv);

// Render just the annotation line for an object ("-- grants: SELECT, INSERT").
std::string annotation_line(const ObjectRef& object, const PrivilegeSet& priv);

// Recover the granted action set from an annotation line; nullopt if the
// line is not an annotation.
std::optional<std::set<Action>> parse_annotation_line(const std::string& line);

}  // namespace bs
