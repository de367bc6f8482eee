#pragma once

#include <string>
#include <vector>

#include "bridgescope/backend.hpp"
#include "bridgescope/session.hpp"

namespace bs {

struct SchemaEntry {
    ObjectRef object;
    std::string body;  // annotated DDL-like text; empty in hierarchical mode
};

struct SchemaRendering {
    enum class Mode { Full, Hierarchical };
    Mode mode = Mode::Full;
    std::vector<SchemaEntry> entries;  // only visible objects, (schema, name) order

    json to_json() const;
};

struct ValueMatch {
    std::string value;
    double score = 0.0;
};

struct ValueMatches {
    std::vector<ValueMatch> matches;
    bool domain_truncated = false;  // distinct-value cap hit; ranking ran on a sample
};

// Visible top-level objects (tables + views) for this session, sorted.
std::vector<ObjectRef> visible_objects(Session& session);

// CREATE-style rendering of one object, without the annotation line.
std::string render_object_ddl(const ObjectDetail& detail);

// Full rendering when the visible object count is below the configured
// threshold, otherwise names only.
SchemaRendering get_schema(Session& session, const ServerConfig& config);

// Annotated detail for one visible object; absent and invisible objects are
// indistinguishable (both UnknownObject).
std::string get_object(Session& session, const ObjectRef& object);

// Top-k distinct column values ranked by lexical similarity to the key.
ValueMatches get_value(Session& session, const ColumnRef& column,
                       const std::string& key, std::size_t k,
                       const ServerConfig& config);

}  // namespace bs
