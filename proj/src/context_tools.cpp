#include "bridgescope/context_tools.hpp"

#include <algorithm>
#include <sstream>

#include "bridgescope/errors.hpp"
#include "bridgescope/similarity.hpp"

namespace bs {

json SchemaRendering::to_json() const {
    json out;
    out["mode"] = mode == Mode::Full ? "full" : "hierarchical";
    out["entries"] = json::array();
    for (const SchemaEntry& e : entries) {
        json entry;
        entry["object"] = e.object.qualified_name();
        entry["kind"] = object_kind_name(e.object.kind);
        if (mode == Mode::Full) entry["body"] = e.body;
        out["entries"].push_back(std::move(entry));
    }
    return out;
}

std::vector<ObjectRef> visible_objects(Session& session) {
    std::vector<ObjectRef> out;
    for (const ObjectRef& o : session.connection().list_objects()) {
        if (object_visible(o, session.privileges(), session.policy()))
            out.push_back(o);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string render_object_ddl(const ObjectDetail& detail) {
    std::ostringstream out;
    out << "CREATE " << (detail.object.kind == ObjectKind::View ? "VIEW" : "TABLE")
        << " " << detail.object.qualified_name() << " (\n";
    bool first = true;
    for (const ColumnInfo& c : detail.columns) {
        if (!first) out << ",\n";
        out << "  " << c.name;
        if (!c.type.empty()) out << " " << c.type;
        if (c.primary_key) out << " PRIMARY KEY";
        if (c.not_null && !c.primary_key) out << " NOT NULL";
        first = false;
    }
    for (const ForeignKey& fk : detail.foreign_keys) {
        out << ",\n  FOREIGN KEY (" << fk.column << ") REFERENCES " << fk.ref_table;
        if (!fk.ref_column.empty()) out << "(" << fk.ref_column << ")";
    }
    out << "\n);";
    for (const IndexInfo& idx : detail.indexes) {
        out << "\nCREATE " << (idx.unique ? "UNIQUE INDEX " : "INDEX ") << idx.name
            << " ON " << detail.object.name << " (";
        for (size_t i = 0; i < idx.columns.size(); ++i) {
            if (i) out << ", ";
            out << idx.columns[i];
        }
        out << ");";
    }
    return out.str();
}

SchemaRendering get_schema(Session& session, const ServerConfig& config) {
    std::vector<ObjectRef> visible = visible_objects(session);
    SchemaRendering rendering;
    rendering.mode = visible.size() < config.schema_threshold
                         ? SchemaRendering::Mode::Full
                         : SchemaRendering::Mode::Hierarchical;
    for (const ObjectRef& o : visible) {
        SchemaEntry entry;
        entry.object = o;
        if (rendering.mode == SchemaRendering::Mode::Full) {
            ObjectDetail detail = session.connection().object_detail(o);
            entry.body = annotate(render_object_ddl(detail), o, session.privileges());
        }
        rendering.entries.push_back(std::move(entry));
    }
    return rendering;
}

std::string get_object(Session& session, const ObjectRef& object) {
    if (!object_visible(object, session.privileges(), session.policy()))
        throw UnknownObjectError("unknown object \"" + object.qualified_name() + "\"");
    ObjectDetail detail = session.connection().object_detail(object);
    return annotate(render_object_ddl(detail), object, session.privileges());
}

ValueMatches get_value(Session& session, const ColumnRef& column, const std::string& key,
                       std::size_t k, const ServerConfig& config) {
    if (k < 1) throw ToolError(errc::malformed_args, "k must be >= 1");
    if (!object_visible(column.relation, session.privileges(), session.policy()))
        throw UnknownObjectError("unknown object \"" +
                                 column.relation.qualified_name() + "\"");
    if (!session.privileges().allows(Action::Select, column.relation) ||
        !session.policy().permits_action(Action::Select)) {
        throw ToolError(errc::no_privilege,
                        "no SELECT privilege on \"" +
                            column.relation.qualified_name() + "\"");
    }
    DistinctValues domain =
        session.connection().distinct_values(column, config.distinct_value_cap);
    std::sort(domain.values.begin(), domain.values.end(),
              [&](const std::string& a, const std::string& b) {
                  return value_rank_less(key, a, b);
              });
    ValueMatches out;
    out.domain_truncated = domain.truncated;
    for (size_t i = 0; i < domain.values.size() && i < k; ++i)
        out.matches.push_back(
            {domain.values[i], trigram_similarity(key, domain.values[i])});
    return out;
}

}  // namespace bs
