#include "bridgescope/proxy.hpp"

#include <algorithm>
#include <future>

#include "bridgescope/errors.hpp"

namespace bs {
namespace {

struct Planner {
    ToolRegistry& registry;
    Session& session;
    int next_order = 0;

    const ToolDescriptor& check_tool(const std::string& name, const std::string& path) {
        const ToolDescriptor* desc = registry.find_descriptor(name);
        if (!desc)
            throw ToolError(errc::unknown_tool,
                            "unknown tool \"" + name + "\" at " + path);
        if (!registry.is_exposed(session, name))
            throw ToolError(errc::tool_not_exposed,
                            "tool \"" + name + "\" is not exposed at " + path);
        return *desc;
    }

    // arg document -> literal | producer
    bool is_producer_doc(const json& doc) const {
        return doc.is_object() && doc.size() == 1 && doc.contains("producer");
    }
    json unwrap_literal(const json& doc) const {
        if (doc.is_object() && doc.size() == 1 && doc.contains("literal"))
            return doc["literal"];
        return doc;
    }

    PlannedUnit plan_unit(const json& request, const std::string& path, size_t depth) {
        if (depth > registry.config().proxy_depth_limit)
            throw ToolError(errc::depth_exceeded,
                            "proxy nesting exceeds depth limit " +
                                std::to_string(registry.config().proxy_depth_limit));
        if (!request.is_object() || !request.contains("target_tool") ||
            !request["target_tool"].is_string())
            throw ToolError(errc::malformed_args,
                            "proxy request needs \"target_tool\" at " + path);
        PlannedUnit unit;
        unit.consumer = request["target_tool"].get<std::string>();
        const ToolDescriptor& consumer = check_tool(unit.consumer, path);
        json tool_args = request.value("tool_args", json::object());
        if (!tool_args.is_object())
            throw ToolError(errc::malformed_args, "\"tool_args\" must be an object");
        for (auto it = tool_args.begin(); it != tool_args.end(); ++it) {
            std::string arg_path = path + ".tool_args." + it.key();
            if (is_producer_doc(it.value())) {
                unit.producers.emplace_back(
                    it.key(), plan_producer(it.value()["producer"], arg_path, depth));
            } else {
                unit.literal_args[it.key()] = unwrap_literal(it.value());
            }
        }
        check_arguments(consumer, unit, path);
        unit.execution_order = next_order++;
        return unit;
    }

    PlannedProducer plan_producer(const json& doc, const std::string& path, size_t depth) {
        if (!doc.is_object() || !doc.contains("tool") || !doc["tool"].is_string())
            throw ToolError(errc::malformed_args,
                            "producer needs a \"tool\" name at " + path);
        PlannedProducer p;
        p.path = path;
        p.tool = doc["tool"].get<std::string>();
        p.transform = parse_transform(doc.value("transform", json()));
        const ToolDescriptor& desc = check_tool(p.tool, path);
        p.read_only =
            desc.risk_class == RiskClass::Read || desc.risk_class == RiskClass::Meta;
        json args = doc.value("args", json::object());
        if (!args.is_object())
            throw ToolError(errc::malformed_args, "producer \"args\" must be an object");
        if (p.tool == "proxy") {
            // recursive composition: the producer's args are themselves a unit
            p.nested_unit = plan_unit(args, path, depth + 1);
            p.read_only = unit_read_only(*p.nested_unit);
            return p;
        }
        for (auto it = args.begin(); it != args.end(); ++it) {
            std::string arg_path = path + ".args." + it.key();
            if (is_producer_doc(it.value())) {
                p.producer_args.emplace_back(
                    it.key(), plan_producer(it.value()["producer"], arg_path, depth + 1));
            } else {
                p.literal_args[it.key()] = unwrap_literal(it.value());
            }
        }
        for (const auto& [_, nested] : p.producer_args)
            if (!nested.read_only) p.read_only = false;
        return p;
    }

    bool unit_read_only(const PlannedUnit& unit) const {
        const ToolDescriptor* desc = registry.find_descriptor(unit.consumer);
        if (!desc || (desc->risk_class != RiskClass::Read &&
                      desc->risk_class != RiskClass::Meta))
            return false;
        for (const auto& [_, p] : unit.producers)
            if (!p.read_only) return false;
        return true;
    }

    void check_arguments(const ToolDescriptor& consumer, const PlannedUnit& unit,
                         const std::string& path) {
        const json& schema = consumer.input_schema;
        auto has_arg = [&](const std::string& name) {
            if (unit.literal_args.contains(name)) return true;
            for (const auto& [key, _] : unit.producers)
                if (key == name) return true;
            return false;
        };
        if (schema.contains("required")) {
            for (const auto& req : schema["required"]) {
                if (!has_arg(req.get<std::string>()))
                    throw ToolError(errc::argument_mismatch,
                                    "missing required argument \"" +
                                        req.get<std::string>() + "\" for tool \"" +
                                        consumer.name + "\" at " + path);
            }
        }
        if (schema.contains("properties")) {
            auto known = [&](const std::string& name) {
                return schema["properties"].contains(name);
            };
            for (auto it = unit.literal_args.begin(); it != unit.literal_args.end(); ++it)
                if (!known(it.key()))
                    throw ToolError(errc::argument_mismatch,
                                    "tool \"" + consumer.name +
                                        "\" has no argument \"" + it.key() + "\"");
            for (const auto& [key, _] : unit.producers)
                if (!known(key))
                    throw ToolError(errc::argument_mismatch,
                                    "tool \"" + consumer.name +
                                        "\" has no argument \"" + key + "\"");
        }
        // duplicate keys between literals and producers cannot occur: both come
        // from one JSON object
    }
};

struct Executor {
    ToolRegistry& registry;
    Session& session;

    json run_producer(const PlannedProducer& p) {
        try {
            json output;
            if (p.nested_unit) {
                output = run_unit(*p.nested_unit);
            } else {
                json args = p.literal_args;
                for (const auto& [name, nested] : p.producer_args)
                    args[name] = run_producer(nested);
                output = registry.call_tool(session, p.tool, args);
            }
            return apply_transform(p.transform, std::move(output));
        } catch (const ToolError& e) {
            if (e.code() == errc::transform_error)
                throw ToolError(e.code(), std::string(e.what()) + " at " + p.path);
            throw ToolError(e.code(), std::string("at ") + p.path + ": " + e.what());
        }
    }

    json run_unit(const PlannedUnit& unit) {
        json args = unit.literal_args;
        bool parallel = unit.producers.size() > 1 &&
                        session.txn_state() == TxnState::None &&
                        std::all_of(unit.producers.begin(), unit.producers.end(),
                                    [](const auto& kv) { return kv.second.read_only; });
        if (parallel) {
            std::vector<std::future<json>> futures;
            futures.reserve(unit.producers.size());
            for (const auto& [_, p] : unit.producers)
                futures.push_back(std::async(std::launch::async,
                                             [this, &p] { return run_producer(p); }));
            // results are bound by argument name; completion order is irrelevant
            for (size_t i = 0; i < unit.producers.size(); ++i)
                args[unit.producers[i].first] = futures[i].get();
        } else {
            for (const auto& [name, p] : unit.producers) args[name] = run_producer(p);
        }
        return registry.call_tool(session, unit.consumer, args);
    }
};

}  // namespace

PlannedUnit plan_proxy(ToolRegistry& registry, Session& session, const json& request) {
    Planner planner{registry, session};
    return planner.plan_unit(request, "proxy", 1);
}

json execute_proxy(ToolRegistry& registry, Session& session, const PlannedUnit& unit) {
    Executor executor{registry, session};
    return executor.run_unit(unit);
}

}  // namespace bs
