#include "bridgescope/privileges.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "bridgescope/errors.hpp"

namespace bs {
namespace {

std::string fold(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

// --- PrivilegeSet -----------------------------------------------------------

void PrivilegeSet::grant(Action action, const ObjectRef& object) {
    if (!is_data_action(action)) return;
    Entry& e = by_object_[object.qualified_name()];
    e.object = object;
    e.actions.insert(action);
}

void PrivilegeSet::grant_all(const ObjectRef& object) {
    for (Action a : kDataActions) grant(a, object);
}

const PrivilegeSet::Entry* PrivilegeSet::find(const ObjectRef& object) const {
    auto it = by_object_.find(object.qualified_name());
    if (it != by_object_.end()) return &it->second;
    // bare grant matches a qualified lookup of the same name, and vice versa
    if (!object.schema.empty()) {
        it = by_object_.find(object.name);
        if (it != by_object_.end()) return &it->second;
    }
    return nullptr;
}

bool PrivilegeSet::allows(Action action, const ObjectRef& object) const {
    const Entry* e = find(object);
    return e && e->actions.count(action) > 0;
}

std::set<Action> PrivilegeSet::actions_on(const ObjectRef& object) const {
    const Entry* e = find(object);
    return e ? e->actions : std::set<Action>{};
}

std::vector<ObjectRef> PrivilegeSet::granted_objects() const {
    std::vector<ObjectRef> out;
    out.reserve(by_object_.size());
    for (const auto& [_, e] : by_object_) out.push_back(e.object);
    std::sort(out.begin(), out.end());
    return out;
}

bool PrivilegeSet::any_grant_for(Action action) const {
    for (const auto& [_, e] : by_object_)
        if (e.actions.count(action)) return true;
    return false;
}

// --- SecurityPolicy ---------------------------------------------------------

bool SecurityPolicy::permits_object(const ObjectRef& object) const {
    const std::string qualified = object.qualified_name();
    if (object_blacklist.count(qualified) || object_blacklist.count(object.name))
        return false;
    if (!object_whitelist) return true;
    return object_whitelist->count(qualified) > 0 ||
           object_whitelist->count(object.name) > 0;
}

bool SecurityPolicy::permits_action(Action action) const {
    if (action_blacklist.count(action)) return false;
    if (!action_whitelist) return true;
    return action_whitelist->count(action) > 0;
}

SecurityPolicy parse_policy(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ToolError(errc::malformed_args,
                        std::string("invalid policy document: ") + e.what());
    }
    SecurityPolicy policy;
    auto read_names = [&](const char* key) -> std::optional<std::set<std::string>> {
        if (!doc.contains("objects") || !doc["objects"].contains(key))
            return std::nullopt;
        std::set<std::string> names;
        for (const auto& v : doc["objects"][key]) names.insert(fold(v.get<std::string>()));
        return names;
    };
    auto read_actions = [&](const char* key) -> std::optional<std::set<Action>> {
        if (!doc.contains("actions") || !doc["actions"].contains(key))
            return std::nullopt;
        std::set<Action> actions;
        for (const auto& v : doc["actions"][key]) {
            auto a = action_from_name(v.get<std::string>());
            if (!a || !is_data_action(*a))
                throw ToolError(errc::malformed_args,
                                "invalid action in policy: " + v.get<std::string>());
            actions.insert(*a);
        }
        return actions;
    };
    policy.object_whitelist = read_names("whitelist");
    if (auto bl = read_names("blacklist")) policy.object_blacklist = std::move(*bl);
    policy.action_whitelist = read_actions("whitelist");
    if (auto bl = read_actions("blacklist")) policy.action_blacklist = std::move(*bl);
    return policy;
}

// --- Exposure and verification ----------------------------------------------

const char* violation_code(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::NoPrivilege: return errc::no_privilege;
    case ViolationKind::PolicyBlocked: return errc::policy_blocked;
    case ViolationKind::ActionMismatch: return errc::action_mismatch;
    }
    return errc::no_privilege;
}

std::set<Action> exposed_actions(const PrivilegeSet& priv, const SecurityPolicy& policy) {
    std::set<Action> out;
    for (Action a : kDataActions) {
        if (!policy.permits_action(a)) continue;
        for (const ObjectRef& o : priv.granted_objects()) {
            if (priv.allows(a, o) && policy.permits_object(o)) {
                out.insert(a);
                break;
            }
        }
    }
    bool any_write = std::any_of(out.begin(), out.end(), is_write_action);
    if (any_write) {
        out.insert(Action::Begin);
        out.insert(Action::Commit);
        out.insert(Action::Rollback);
    }
    return out;
}

bool object_visible(const ObjectRef& object, const PrivilegeSet& priv,
                    const SecurityPolicy& policy) {
    if (!policy.permits_object(object)) return false;
    for (Action a : priv.actions_on(object))
        if (policy.permits_action(a)) return true;
    return false;
}

std::optional<Violation> verify(const std::set<AccessRequirement>& requirements,
                                const PrivilegeSet& priv, const SecurityPolicy& policy) {
    // std::set iteration is already the deterministic sorted order
    for (const AccessRequirement& req : requirements) {
        if (!priv.allows(req.action, req.object)) {
            return Violation{
                ViolationKind::NoPrivilege, req,
                std::string("no ") + action_name(req.action) + " privilege on \"" +
                    req.object.qualified_name() + "\""};
        }
        if (!policy.permits_action(req.action) || !policy.permits_object(req.object)) {
            // Name the object only when it is otherwise visible to this user.
            std::string what = object_visible(req.object, priv, policy)
                                   ? "\"" + req.object.qualified_name() + "\""
                                   : "the referenced object";
            return Violation{ViolationKind::PolicyBlocked, req,
                             std::string("security policy blocks ") +
                                 action_name(req.action) + " on " + what};
        }
    }
    return std::nullopt;
}

// --- Annotations --------------------------------------------------------------

namespace {
constexpr const char* kAnnotationPrefix = "-- grants: ";
}

std::string annotation_line(const ObjectRef& object, const PrivilegeSet& priv) {
    std::ostringstream out;
    out << kAnnotationPrefix;
    bool first = true;
    for (Action a : priv.actions_on(object)) {
        if (!first) out << ", ";
        out << action_name(a);
        first = false;
    }
    return out.str();
}

std::string annotate(const std::string& object_schema, const ObjectRef& object,
                     const PrivilegeSet& priv) {
    return annotation_line(object, priv) + "\n" + object_schema;
}

std::optional<std::set<Action>> parse_annotation_line(const std::string& line) {
    if (line.rfind(kAnnotationPrefix, 0) != 0) return std::nullopt;
    std::set<Action> actions;
    std::string rest = line.substr(std::string(kAnnotationPrefix).size());
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t b = item.find_first_not_of(' ');
        size_t e = item.find_last_not_of(' ');
        if (b == std::string::npos) continue;
        auto a = action_from_name(item.substr(b, e - b + 1));
        if (!a) return std::nullopt;
        actions.insert(*a);
    }
    return actions;
}

}  // namespace bs
