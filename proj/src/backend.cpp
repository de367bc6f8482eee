#include "bridgescope/backend.hpp"

#include <algorithm>
#include <sstream>

namespace bs {

json ExecResult::to_json() const {
    json out;
    if (kind == Kind::Rows) {
        out["kind"] = "rows";
        out["rows"] = rows;
    } else {
        out["kind"] = "affected";
        out["affected"] = affected;
    }
    return out;
}

std::string dump_database(Connection& conn) {
    std::ostringstream out;
    for (const ObjectRef& o : conn.list_objects()) {
        if (o.kind == ObjectKind::View) continue;
        out << "== " << o.qualified_name() << " ==\n";
        ExecResult res = conn.execute("SELECT * FROM \"" + o.name + "\"");
        std::vector<std::string> lines;
        for (const auto& row : res.rows) lines.push_back(row.dump());
        std::sort(lines.begin(), lines.end());
        for (const auto& line : lines) out << line << "\n";
    }
    return out.str();
}

}  // namespace bs
