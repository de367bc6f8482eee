#include "bridgescope/memory_backend.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <random>
#include <sstream>

#include "bridgescope/errors.hpp"
#include "bridgescope/sql_analyzer.hpp"

namespace bs {
namespace {

std::string fold(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string quote_ident(const std::string& name) {
    std::string out = "\"";
    for (char c : name) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string make_db_path() {
    std::random_device rd;
    std::uniform_int_distribution<unsigned long long> dist;
    std::ostringstream name;
    name << "bridgescope-" << std::hex << dist(rd) << ".db";
    return (std::filesystem::temp_directory_path() / name.str()).string();
}

json column_value(sqlite3_stmt* stmt, int col) {
    switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_INTEGER:
        return json(static_cast<std::int64_t>(sqlite3_column_int64(stmt, col)));
    case SQLITE_FLOAT:
        return json(sqlite3_column_double(stmt, col));
    case SQLITE_NULL:
        return json(nullptr);
    default: {
        const unsigned char* text = sqlite3_column_text(stmt, col);
        return json(text ? reinterpret_cast<const char*>(text) : "");
    }
    }
}

// Minimal GRANT grammar for the reference backend:
//   GRANT action[, action...] | ALL [PRIVILEGES] ON [TABLE] obj[, obj...] TO user
struct GrantStatement {
    std::vector<Action> actions;  // empty = ALL
    std::vector<std::string> objects;
    std::string user;
};

std::optional<GrantStatement> parse_grant(const std::string& sql) {
    std::vector<std::string> words;
    std::string word;
    for (char c : sql) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';') {
            if (!word.empty()) words.push_back(fold(word));
            word.clear();
            if (c == ',') words.push_back(",");
        } else {
            word += c;
        }
    }
    if (!word.empty()) words.push_back(fold(word));
    size_t i = 0;
    auto at = [&](const char* w) { return i < words.size() && words[i] == w; };
    if (!at("grant")) return std::nullopt;
    ++i;
    GrantStatement g;
    if (at("all")) {
        ++i;
        if (at("privileges")) ++i;
    } else {
        while (i < words.size() && words[i] != "on") {
            if (words[i] == ",") {
                ++i;
                continue;
            }
            auto a = action_from_name(words[i]);
            if (!a || !is_data_action(*a)) return std::nullopt;
            g.actions.push_back(*a);
            ++i;
        }
    }
    if (!at("on")) return std::nullopt;
    ++i;
    if (at("table")) ++i;
    while (i < words.size() && words[i] != "to") {
        if (words[i] != ",") g.objects.push_back(words[i]);
        ++i;
    }
    if (!at("to") || i + 1 >= words.size()) return std::nullopt;
    g.user = words[i + 1];
    if (g.objects.empty() || g.user.empty()) return std::nullopt;
    return g;
}

}  // namespace

class MemoryConnection : public Connection {
public:
    MemoryConnection(const std::string& path, std::string user, std::string superuser,
                     std::chrono::milliseconds timeout,
                     std::shared_ptr<MemoryBackend::Grants> grants)
        : user_(std::move(user)),
          superuser_(std::move(superuser)),
          timeout_(timeout),
          grants_(std::move(grants)) {
        if (sqlite3_open_v2(path.c_str(), &db_,
                            SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                                SQLITE_OPEN_FULLMUTEX,
                            nullptr) != SQLITE_OK) {
            std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
            if (db_) sqlite3_close(db_);
            throw BackendUnavailable("cannot open reference database: " + msg);
        }
        raw_exec("PRAGMA journal_mode=WAL");
        raw_exec("PRAGMA foreign_keys=ON");
        sqlite3_busy_timeout(db_, 5000);
    }

    ~MemoryConnection() override {
        if (db_) sqlite3_close(db_);
    }

    ExecResult execute(const std::string& sql) override {
        ParsedStatement stmt = sql::parse(sql);
        if (stmt.action == Action::Other) {
            if (auto grant = parse_grant(sql)) {
                apply_grant(*grant);
                return {};
            }
            if (user_ != superuser_)
                throw BackendError("permission denied: administrative statements "
                                   "require the superuser");
            return run(sql, stmt.action);
        }
        // Native privilege enforcement: the engine-side check that holds even
        // if tool-level verification were bypassed.
        if (user_ != superuser_) {
            std::lock_guard lock(grants_->mutex);
            const PrivilegeSet& priv = grants_->by_user[user_];
            for (const AccessRequirement& req : stmt.requirements) {
                if (!priv.allows(req.action, req.object))
                    throw BackendError(std::string("permission denied for ") +
                                       action_name(req.action) + " on \"" +
                                       req.object.qualified_name() + "\"");
            }
        }
        return run(sql, stmt.action);
    }

    void txn_begin() override { run("BEGIN", Action::Begin); }
    void txn_commit() override { run("COMMIT", Action::Commit); }
    void txn_rollback() override { run("ROLLBACK", Action::Rollback); }

    std::vector<ObjectRef> list_objects() override {
        std::vector<ObjectRef> out;
        query("SELECT name, type FROM sqlite_master WHERE type IN ('table','view') "
              "AND name NOT LIKE 'sqlite_%' ORDER BY name",
              [&](sqlite3_stmt* stmt) {
                  ObjectRef o;
                  o.name = reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0));
                  std::string type =
                      reinterpret_cast<const char*>(sqlite3_column_text(stmt, 1));
                  o.kind = type == "view" ? ObjectKind::View : ObjectKind::Table;
                  out.push_back(std::move(o));
              });
        return out;
    }

    ObjectDetail object_detail(const ObjectRef& object) override {
        ObjectDetail detail;
        detail.object = object;
        detail.object.kind = object_kind(object.name);
        if (detail.object.kind == ObjectKind::Unknown)
            throw UnknownObjectError("unknown object \"" + object.name + "\"");
        query("PRAGMA table_info(" + quote_ident(object.name) + ")",
              [&](sqlite3_stmt* stmt) {
                  ColumnInfo c;
                  c.name = reinterpret_cast<const char*>(sqlite3_column_text(stmt, 1));
                  const char* type =
                      reinterpret_cast<const char*>(sqlite3_column_text(stmt, 2));
                  c.type = type ? type : "";
                  c.not_null = sqlite3_column_int(stmt, 3) != 0;
                  c.primary_key = sqlite3_column_int(stmt, 5) != 0;
                  detail.columns.push_back(std::move(c));
              });
        query("PRAGMA foreign_key_list(" + quote_ident(object.name) + ")",
              [&](sqlite3_stmt* stmt) {
                  ForeignKey fk;
                  fk.ref_table =
                      reinterpret_cast<const char*>(sqlite3_column_text(stmt, 2));
                  fk.column = reinterpret_cast<const char*>(sqlite3_column_text(stmt, 3));
                  const char* to =
                      reinterpret_cast<const char*>(sqlite3_column_text(stmt, 4));
                  fk.ref_column = to ? to : "";
                  detail.foreign_keys.push_back(std::move(fk));
              });
        std::vector<std::pair<std::string, bool>> index_names;
        query("PRAGMA index_list(" + quote_ident(object.name) + ")",
              [&](sqlite3_stmt* stmt) {
                  const char* origin =
                      reinterpret_cast<const char*>(sqlite3_column_text(stmt, 3));
                  if (origin && std::string(origin) == "pk") return;  // implicit
                  index_names.emplace_back(
                      reinterpret_cast<const char*>(sqlite3_column_text(stmt, 1)),
                      sqlite3_column_int(stmt, 2) != 0);
              });
        for (const auto& [name, unique] : index_names) {
            IndexInfo idx;
            idx.name = name;
            idx.unique = unique;
            query("PRAGMA index_info(" + quote_ident(name) + ")",
                  [&](sqlite3_stmt* stmt) {
                      const char* col =
                          reinterpret_cast<const char*>(sqlite3_column_text(stmt, 2));
                      if (col) idx.columns.push_back(col);
                  });
            detail.indexes.push_back(std::move(idx));
        }
        return detail;
    }

    DistinctValues distinct_values(const ColumnRef& column, std::size_t cap) override {
        ObjectDetail detail = object_detail(column.relation);  // UnknownObject check
        bool has_column = std::any_of(
            detail.columns.begin(), detail.columns.end(),
            [&](const ColumnInfo& c) { return fold(c.name) == fold(column.column); });
        if (!has_column)
            throw ToolError(errc::unknown_column, "unknown column \"" + column.column +
                                                      "\" in \"" +
                                                      column.relation.name + "\"");
        DistinctValues out;
        std::string sql = "SELECT DISTINCT " + quote_ident(column.column) + " FROM " +
                          quote_ident(column.relation.name) + " WHERE " +
                          quote_ident(column.column) + " IS NOT NULL ORDER BY 1 LIMIT " +
                          std::to_string(cap + 1);
        query(sql, [&](sqlite3_stmt* stmt) {
            const unsigned char* text = sqlite3_column_text(stmt, 0);
            out.values.push_back(text ? reinterpret_cast<const char*>(text) : "");
        });
        if (out.values.size() > cap) {
            out.values.resize(cap);
            out.truncated = true;
        }
        return out;
    }

    PrivilegeSet introspect_privileges(const std::string& user) override {
        if (user == superuser_) {
            // superuser: full grants on every object
            PrivilegeSet priv;
            for (const ObjectRef& o : list_objects()) priv.grant_all(o);
            return priv;
        }
        std::lock_guard lock(grants_->mutex);
        auto it = grants_->by_user.find(fold(user));
        return it != grants_->by_user.end() ? it->second : PrivilegeSet{};
    }

    BackendCapabilities capabilities() const override {
        return {/*transactional_ddl=*/true, "serializable", IdentifierFolding::Lower};
    }

private:
    sqlite3* db_ = nullptr;
    std::string user_;
    std::string superuser_;
    std::chrono::milliseconds timeout_;
    std::shared_ptr<MemoryBackend::Grants> grants_;

    void apply_grant(const GrantStatement& g) {
        if (user_ != superuser_)
            throw BackendError("permission denied: only the superuser may GRANT");
        std::lock_guard lock(grants_->mutex);
        PrivilegeSet& priv = grants_->by_user[fold(g.user)];
        for (const std::string& name : g.objects) {
            ObjectRef o{"", name, object_kind(name)};
            if (g.actions.empty()) {
                priv.grant_all(o);
            } else {
                for (Action a : g.actions) priv.grant(a, o);
            }
        }
    }

    ObjectKind object_kind(const std::string& name) {
        ObjectKind kind = ObjectKind::Unknown;
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db_,
                               "SELECT type FROM sqlite_master WHERE lower(name)=lower(?)",
                               -1, &stmt, nullptr) == SQLITE_OK) {
            sqlite3_bind_text(stmt, 1, name.c_str(), -1, SQLITE_TRANSIENT);
            if (sqlite3_step(stmt) == SQLITE_ROW) {
                std::string type =
                    reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0));
                kind = type == "view" ? ObjectKind::View : ObjectKind::Table;
            }
        }
        sqlite3_finalize(stmt);
        return kind;
    }

    void raw_exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown sqlite error";
            sqlite3_free(err);
            throw BackendError(msg);
        }
        sqlite3_free(err);
    }

    template <typename RowFn>
    void query(const std::string& sql, RowFn&& on_row) {
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
            throw BackendError(sqlite3_errmsg(db_));
        int rc;
        while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) on_row(stmt);
        std::string err = rc == SQLITE_DONE ? "" : sqlite3_errmsg(db_);
        sqlite3_finalize(stmt);
        if (!err.empty()) throw BackendError(err);
    }

    ExecResult run(const std::string& sql, Action action) {
        sqlite3_stmt* stmt = nullptr;
        const char* tail = nullptr;
        if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt, &tail) != SQLITE_OK)
            throw BackendError(sqlite3_errmsg(db_));
        auto deadline = std::chrono::steady_clock::now() + timeout_;
        struct Deadline {
            std::chrono::steady_clock::time_point at;
        } dl{deadline};
        sqlite3_progress_handler(
            db_, 1000,
            [](void* ctx) -> int {
                return std::chrono::steady_clock::now() >
                               static_cast<Deadline*>(ctx)->at
                           ? 1
                           : 0;
            },
            &dl);
        ExecResult result;
        int cols = sqlite3_column_count(stmt);
        int rc;
        while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
            json row = json::object();
            for (int c = 0; c < cols; ++c)
                row[sqlite3_column_name(stmt, c)] = column_value(stmt, c);
            result.rows.push_back(std::move(row));
        }
        sqlite3_progress_handler(db_, 0, nullptr, nullptr);
        if (rc != SQLITE_DONE) {
            std::string err = sqlite3_errmsg(db_);
            sqlite3_finalize(stmt);
            if (rc == SQLITE_INTERRUPT)
                throw BackendError("statement timeout exceeded");
            throw BackendError(err);
        }
        sqlite3_finalize(stmt);
        if ((action == Action::Select || action == Action::Other) && cols > 0) {
            result.kind = ExecResult::Kind::Rows;
        } else {
            result.kind = ExecResult::Kind::Affected;
            result.affected = static_cast<std::uint64_t>(sqlite3_changes64(db_));
        }
        return result;
    }
};

MemoryBackend::MemoryBackend(std::string superuser,
                             std::chrono::milliseconds statement_timeout)
    : db_path_(make_db_path()),
      superuser_(std::move(superuser)),
      statement_timeout_(statement_timeout),
      grants_(std::make_shared<Grants>()) {
    // initialize the database file and WAL journal up front
    MemoryConnection conn(db_path_, superuser_, superuser_, statement_timeout_, grants_);
}

MemoryBackend::~MemoryBackend() {
    std::error_code ec;
    for (const char* suffix : {"", "-wal", "-shm"})
        std::filesystem::remove(db_path_ + suffix, ec);
}

std::unique_ptr<Connection> MemoryBackend::connect(const std::string& user) {
    return std::make_unique<MemoryConnection>(db_path_, user, superuser_,
                                              statement_timeout_, grants_);
}

}  // namespace bs
