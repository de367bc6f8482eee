#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "bridgescope/privileges.hpp"
#include "bridgescope/types.hpp"

namespace bs {

using json = nlohmann::ordered_json;

struct ExecResult {
    enum class Kind { Rows, Affected };
    Kind kind = Kind::Affected;
    json rows = json::array();  // array of {column: value} records, column order kept
    std::uint64_t affected = 0;

    json to_json() const;
};

struct ColumnInfo {
    std::string name;
    std::string type;
    bool not_null = false;
    bool primary_key = false;
};

struct ForeignKey {
    std::string column;
    std::string ref_table;
    std::string ref_column;
};

struct IndexInfo {
    std::string name;
    std::vector<std::string> columns;
    bool unique = false;
};

struct ObjectDetail {
    ObjectRef object;
    std::vector<ColumnInfo> columns;
    std::vector<ForeignKey> foreign_keys;
    std::vector<IndexInfo> indexes;
};

struct ColumnRef {
    ObjectRef relation;
    std::string column;
};

struct DistinctValues {
    std::vector<std::string> values;  // non-null, distinct
    bool truncated = false;
};

enum class IdentifierFolding { Lower, Upper, Exact };

struct BackendCapabilities {
    bool transactional_ddl = false;
    std::string isolation_default;
    IdentifierFolding identifier_folding = IdentifierFolding::Lower;
};

// One session's database connection. Implementations are not shared across
// concurrent calls; each session owns exactly one connection.
class Connection {
public:
    virtual ~Connection() = default;

    virtual ExecResult execute(const std::string& sql) = 0;
    virtual void txn_begin() = 0;
    virtual void txn_commit() = 0;
    virtual void txn_rollback() = 0;
    virtual std::vector<ObjectRef> list_objects() = 0;
    virtual ObjectDetail object_detail(const ObjectRef& object) = 0;
    virtual DistinctValues distinct_values(const ColumnRef& column, std::size_t cap) = 0;
    virtual PrivilegeSet introspect_privileges(const std::string& user) = 0;
    virtual BackendCapabilities capabilities() const = 0;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::unique_ptr<Connection> connect(const std::string& user) = 0;
};

// Canonical full-database dump: every user table in name order, rows sorted
// by their rendered form. Used by the atomicity/rollback oracles.
std::string dump_database(Connection& conn);

}  // namespace bs
