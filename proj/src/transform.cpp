#include "bridgescope/transform.hpp"

#include "bridgescope/errors.hpp"

namespace bs {
namespace {

[[noreturn]] void step_fail(size_t index, const std::string& msg) {
    throw ToolError(errc::transform_error,
                    "transform step " + std::to_string(index) + ": " + msg);
}

json project_record(const json& record, const std::vector<std::string>& fields,
                    size_t index) {
    if (!record.is_object()) step_fail(index, "project expects records");
    json out = json::object();
    for (const std::string& f : fields) {
        auto it = record.find(f);
        if (it == record.end()) step_fail(index, "missing field \"" + f + "\"");
        out[f] = *it;
    }
    return out;
}

json rename_record(const json& record,
                   const std::vector<std::pair<std::string, std::string>>& mapping,
                   size_t index) {
    if (!record.is_object()) step_fail(index, "rename expects records");
    json out = json::object();
    for (auto it = record.begin(); it != record.end(); ++it) {
        std::string key = it.key();
        for (const auto& [from, to] : mapping)
            if (key == from) {
                key = to;
                break;
            }
        out[key] = it.value();
    }
    return out;
}

json apply_step(const TransformStep& step, json input, size_t index) {
    switch (step.kind) {
    case TransformStep::Kind::Identity:
        return input;
    case TransformStep::Kind::Project: {
        if (input.is_array()) {
            json out = json::array();
            for (const auto& row : input)
                out.push_back(project_record(row, step.fields, index));
            return out;
        }
        return project_record(input, step.fields, index);
    }
    case TransformStep::Kind::Rename: {
        if (input.is_array()) {
            json out = json::array();
            for (const auto& row : input)
                out.push_back(rename_record(row, step.mapping, index));
            return out;
        }
        return rename_record(input, step.mapping, index);
    }
    case TransformStep::Kind::Pick: {
        json current = std::move(input);
        for (const auto& key : step.path) {
            if (key.is_string()) {
                if (!current.is_object() || !current.contains(key.get<std::string>()))
                    step_fail(index, "pick: no key \"" + key.get<std::string>() + "\"");
                current = current[key.get<std::string>()];
            } else if (key.is_number_integer()) {
                auto i = key.get<std::int64_t>();
                if (!current.is_array() || i < 0 ||
                    static_cast<size_t>(i) >= current.size())
                    step_fail(index, "pick: index " + std::to_string(i) + " out of range");
                current = current[static_cast<size_t>(i)];
            } else {
                step_fail(index, "pick: path elements must be keys or indexes");
            }
        }
        return current;
    }
    case TransformStep::Kind::Concat: {
        if (!input.is_array()) step_fail(index, "concat expects a list of lists");
        json out = json::array();
        for (const auto& part : input) {
            if (!part.is_array()) step_fail(index, "concat expects a list of lists");
            for (const auto& v : part) out.push_back(v);
        }
        return out;
    }
    }
    step_fail(index, "unknown step");
}

}  // namespace

TransformSpec parse_transform(const json& spec) {
    if (spec.is_null()) return {};
    if (!spec.is_array())
        throw ToolError(errc::malformed_args, "transform must be an array of steps");
    TransformSpec out;
    for (const auto& doc : spec) {
        if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
            throw ToolError(errc::malformed_args, "transform step needs a \"kind\"");
        std::string kind = doc["kind"].get<std::string>();
        TransformStep step;
        if (kind == "identity") {
            step.kind = TransformStep::Kind::Identity;
        } else if (kind == "project") {
            step.kind = TransformStep::Kind::Project;
            if (!doc.contains("fields") || !doc["fields"].is_array())
                throw ToolError(errc::malformed_args, "project needs \"fields\"");
            for (const auto& f : doc["fields"]) step.fields.push_back(f.get<std::string>());
        } else if (kind == "rename") {
            step.kind = TransformStep::Kind::Rename;
            if (!doc.contains("mapping") || !doc["mapping"].is_object())
                throw ToolError(errc::malformed_args, "rename needs \"mapping\"");
            for (auto it = doc["mapping"].begin(); it != doc["mapping"].end(); ++it)
                step.mapping.emplace_back(it.key(), it.value().get<std::string>());
        } else if (kind == "pick") {
            step.kind = TransformStep::Kind::Pick;
            if (!doc.contains("path") || !doc["path"].is_array())
                throw ToolError(errc::malformed_args, "pick needs \"path\"");
            step.path = doc["path"];
        } else if (kind == "concat") {
            step.kind = TransformStep::Kind::Concat;
        } else {
            throw ToolError(errc::malformed_args, "unknown transform kind \"" + kind + "\"");
        }
        out.push_back(std::move(step));
    }
    return out;
}

json apply_transform(const TransformSpec& spec, json input) {
    json current = std::move(input);
    for (size_t i = 0; i < spec.size(); ++i)
        current = apply_step(spec[i], std::move(current), i);
    return current;
}

}  // namespace bs
