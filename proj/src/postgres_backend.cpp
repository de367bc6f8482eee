#include "bridgescope/postgres_backend.hpp"

#include <libpq-fe.h>

#include <cctype>
#include <cstdlib>
#include <map>

#include "bridgescope/errors.hpp"

namespace bs {
namespace {

std::string trim_message(const char* msg) {
    std::string s = msg ? msg : "unknown libpq error";
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

class PgResult {
public:
    explicit PgResult(PGresult* r) : r_(r) {}
    ~PgResult() {
        if (r_) PQclear(r_);
    }
    PgResult(const PgResult&) = delete;
    PgResult& operator=(const PgResult&) = delete;
    PGresult* get() const { return r_; }

private:
    PGresult* r_;
};

// Numeric-ish type OIDs worth rendering as JSON numbers.
bool numeric_oid(Oid oid) {
    switch (oid) {
        case 20:    // int8
        case 21:    // int2
        case 23:    // int4
        case 700:   // float4
        case 701:   // float8
        case 1700:  // numeric
            return true;
        default:
            return false;
    }
}

class PostgresConnection : public Connection {
public:
    PostgresConnection(const std::string& conninfo, const std::string& user,
                       std::chrono::milliseconds timeout) {
        conn_ = PQconnectdb(conninfo.c_str());
        if (!conn_ || PQstatus(conn_) != CONNECTION_OK) {
            std::string msg = conn_ ? trim_message(PQerrorMessage(conn_))
                                    : "out of memory";
            if (conn_) PQfinish(conn_);
            conn_ = nullptr;
            throw BackendUnavailable("cannot connect to PostgreSQL: " + msg);
        }
        run("SET statement_timeout = " + std::to_string(timeout.count()));
        std::string current = PQuser(conn_) ? PQuser(conn_) : "";
        if (!user.empty() && user != current) run("SET ROLE " + quote_ident(user));
        user_ = user.empty() ? current : user;
    }

    ~PostgresConnection() override {
        if (conn_) PQfinish(conn_);
    }

    ExecResult execute(const std::string& sql) override {
        PgResult res(PQexec(conn_, sql.c_str()));
        ExecStatusType status = PQresultStatus(res.get());
        if (status == PGRES_TUPLES_OK) return rows_result(res.get());
        if (status == PGRES_COMMAND_OK) {
            ExecResult out;
            out.kind = ExecResult::Kind::Affected;
            const char* tuples = PQcmdTuples(res.get());
            out.affected = (tuples && *tuples) ? std::strtoull(tuples, nullptr, 10) : 0;
            return out;
        }
        throw BackendError(trim_message(PQresultErrorMessage(res.get())));
    }

    void txn_begin() override { run("BEGIN"); }
    void txn_commit() override { run("COMMIT"); }
    void txn_rollback() override { run("ROLLBACK"); }

    std::vector<ObjectRef> list_objects() override {
        ExecResult r = execute(
            "SELECT table_schema, table_name, table_type"
            " FROM information_schema.tables"
            " WHERE table_schema NOT IN ('pg_catalog', 'information_schema')"
            " ORDER BY table_schema, table_name");
        std::vector<ObjectRef> out;
        for (const json& row : r.rows) {
            ObjectRef o;
            o.schema = row["table_schema"].get<std::string>();
            o.name = row["table_name"].get<std::string>();
            o.kind = row["table_type"].get<std::string>() == "VIEW" ? ObjectKind::View
                                                                    : ObjectKind::Table;
            out.push_back(std::move(o));
        }
        return out;
    }

    ObjectDetail object_detail(const ObjectRef& object) override {
        ObjectDetail detail;
        detail.object = object;
        std::string schema = object.schema.empty() ? "public" : object.schema;
        ExecResult cols = execute(
            "SELECT c.column_name, c.data_type, c.is_nullable,"
            " EXISTS (SELECT 1 FROM information_schema.key_column_usage k"
            "  JOIN information_schema.table_constraints tc"
            "   ON tc.constraint_name = k.constraint_name"
            "   AND tc.table_schema = k.table_schema"
            "  WHERE tc.constraint_type = 'PRIMARY KEY'"
            "   AND k.table_schema = c.table_schema"
            "   AND k.table_name = c.table_name"
            "   AND k.column_name = c.column_name) AS is_pk"
            " FROM information_schema.columns c"
            " WHERE c.table_schema = " + quote_literal(schema) +
            " AND c.table_name = " + quote_literal(object.name) +
            " ORDER BY c.ordinal_position");
        if (cols.rows.empty())
            throw UnknownObjectError("unknown object: " + object.qualified_name());
        for (const json& row : cols.rows) {
            ColumnInfo col;
            col.name = row["column_name"].get<std::string>();
            col.type = row["data_type"].get<std::string>();
            col.not_null = row["is_nullable"].get<std::string>() == "NO";
            col.primary_key = row["is_pk"].get<bool>();
            detail.columns.push_back(std::move(col));
        }
        ExecResult fks = execute(
            "SELECT k.column_name, ck.table_name AS ref_table,"
            " ck.column_name AS ref_column"
            " FROM information_schema.referential_constraints rc"
            " JOIN information_schema.key_column_usage k"
            "  ON k.constraint_name = rc.constraint_name"
            "  AND k.table_schema = rc.constraint_schema"
            " JOIN information_schema.key_column_usage ck"
            "  ON ck.constraint_name = rc.unique_constraint_name"
            "  AND ck.table_schema = rc.unique_constraint_schema"
            "  AND ck.ordinal_position = k.position_in_unique_constraint"
            " WHERE k.table_schema = " + quote_literal(schema) +
            " AND k.table_name = " + quote_literal(object.name) +
            " ORDER BY k.ordinal_position");
        for (const json& row : fks.rows)
            detail.foreign_keys.push_back({row["column_name"].get<std::string>(),
                                           row["ref_table"].get<std::string>(),
                                           row["ref_column"].get<std::string>()});
        ExecResult idx = execute(
            "SELECT i.relname AS index_name, a.attname AS column_name,"
            " ix.indisunique AS is_unique"
            " FROM pg_class t"
            " JOIN pg_namespace n ON n.oid = t.relnamespace"
            " JOIN pg_index ix ON ix.indrelid = t.oid"
            " JOIN pg_class i ON i.oid = ix.indexrelid"
            " JOIN pg_attribute a ON a.attrelid = t.oid"
            "  AND a.attnum = ANY (ix.indkey)"
            " WHERE NOT ix.indisprimary"
            " AND n.nspname = " + quote_literal(schema) +
            " AND t.relname = " + quote_literal(object.name) +
            " ORDER BY i.relname, a.attnum");
        std::map<std::string, IndexInfo> by_name;
        std::vector<std::string> order;
        for (const json& row : idx.rows) {
            std::string name = row["index_name"].get<std::string>();
            if (!by_name.count(name)) {
                by_name[name] = {name, {}, row["is_unique"].get<bool>()};
                order.push_back(name);
            }
            by_name[name].columns.push_back(row["column_name"].get<std::string>());
        }
        for (const std::string& name : order) detail.indexes.push_back(by_name[name]);
        return detail;
    }

    DistinctValues distinct_values(const ColumnRef& column, std::size_t cap) override {
        std::string rel = column.relation.schema.empty()
                              ? quote_ident(column.relation.name)
                              : quote_ident(column.relation.schema) + "." +
                                    quote_ident(column.relation.name);
        ExecResult r = execute("SELECT DISTINCT " + quote_ident(column.column) +
                               "::text AS v FROM " + rel + " WHERE " +
                               quote_ident(column.column) + " IS NOT NULL" +
                               " ORDER BY 1 LIMIT " + std::to_string(cap + 1));
        DistinctValues out;
        for (const json& row : r.rows) {
            if (out.values.size() == cap) {
                out.truncated = true;
                break;
            }
            out.values.push_back(row["v"].get<std::string>());
        }
        return out;
    }

    PrivilegeSet introspect_privileges(const std::string& user) override {
        PrivilegeSet set;
        ExecResult super = execute("SELECT rolsuper FROM pg_roles WHERE rolname = " +
                                   quote_literal(user));
        bool is_super = !super.rows.empty() && super.rows[0]["rolsuper"].get<bool>();
        if (is_super) {
            for (const ObjectRef& o : list_objects()) set.grant_all(o);
            return set;
        }
        ExecResult r = execute(
            "SELECT table_schema, table_name, privilege_type"
            " FROM information_schema.role_table_grants"
            " WHERE grantee IN (" + quote_literal(user) + ", 'PUBLIC')"
            " AND table_schema NOT IN ('pg_catalog', 'information_schema')"
            " ORDER BY table_schema, table_name, privilege_type");
        for (const json& row : r.rows) {
            ObjectRef o{row["table_schema"].get<std::string>(),
                        row["table_name"].get<std::string>(), ObjectKind::Table};
            std::string priv = row["privilege_type"].get<std::string>();
            for (char& c : priv) c = static_cast<char>(std::tolower(c));
            if (auto action = action_from_name(priv)) set.grant(*action, o);
        }
        return set;
    }

    BackendCapabilities capabilities() const override {
        return {true, "read committed", IdentifierFolding::Lower};
    }

private:
    PGconn* conn_ = nullptr;
    std::string user_;

    void run(const std::string& sql) {
        PgResult res(PQexec(conn_, sql.c_str()));
        ExecStatusType status = PQresultStatus(res.get());
        if (status != PGRES_COMMAND_OK && status != PGRES_TUPLES_OK)
            throw BackendError(trim_message(PQresultErrorMessage(res.get())));
    }

    ExecResult rows_result(PGresult* res) {
        ExecResult out;
        out.kind = ExecResult::Kind::Rows;
        int nrows = PQntuples(res), ncols = PQnfields(res);
        for (int r = 0; r < nrows; ++r) {
            json row = json::object();
            for (int c = 0; c < ncols; ++c) {
                std::string name = PQfname(res, c);
                if (PQgetisnull(res, r, c)) {
                    row[name] = nullptr;
                    continue;
                }
                std::string text = PQgetvalue(res, r, c);
                Oid oid = PQftype(res, c);
                if (oid == 16) {  // bool
                    row[name] = text == "t";
                } else if (numeric_oid(oid)) {
                    row[name] = json::parse(text, nullptr, false).is_discarded()
                                    ? json(text)
                                    : json::parse(text);
                } else {
                    row[name] = text;
                }
            }
            out.rows.push_back(std::move(row));
        }
        return out;
    }

    std::string quote_ident(const std::string& s) {
        char* q = PQescapeIdentifier(conn_, s.c_str(), s.size());
        if (!q) throw BackendError(trim_message(PQerrorMessage(conn_)));
        std::string out = q;
        PQfreemem(q);
        return out;
    }

    std::string quote_literal(const std::string& s) {
        char* q = PQescapeLiteral(conn_, s.c_str(), s.size());
        if (!q) throw BackendError(trim_message(PQerrorMessage(conn_)));
        std::string out = q;
        PQfreemem(q);
        return out;
    }
};

}  // namespace

PostgresBackend::PostgresBackend(std::string conninfo,
                                 std::chrono::milliseconds statement_timeout)
    : conninfo_(std::move(conninfo)), statement_timeout_(statement_timeout) {}

std::unique_ptr<Connection> PostgresBackend::connect(const std::string& user) {
    return std::make_unique<PostgresConnection>(conninfo_, user, statement_timeout_);
}

}  // namespace bs
