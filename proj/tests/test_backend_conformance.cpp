#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <set>
#include <string>

#include "bridgescope/memory_backend.hpp"
#ifdef BRIDGESCOPE_HAVE_LIBPQ
#include "bridgescope/postgres_backend.hpp"
#endif

using namespace bs;

namespace {

// Black-box conformance contract every backend must satisfy. `user` must be
// able to create and drop tables and read its own privileges.
void run_conformance(Backend& backend, const std::string& user) {
    auto conn = backend.connect(user);
    conn->execute("DROP TABLE IF EXISTS bs_conf_child");
    conn->execute("DROP TABLE IF EXISTS bs_conf_parent");
    conn->execute(
        "CREATE TABLE bs_conf_parent ("
        " id INTEGER PRIMARY KEY,"
        " label TEXT NOT NULL,"
        " score DOUBLE PRECISION)");
    conn->execute(
        "CREATE TABLE bs_conf_child ("
        " id INTEGER PRIMARY KEY,"
        " parent_id INTEGER NOT NULL REFERENCES bs_conf_parent(id),"
        " note TEXT)");
    conn->execute("CREATE UNIQUE INDEX bs_conf_label_idx ON bs_conf_parent (label)");

    INFO("user: " << user);

    SUBCASE("row results preserve column order and types") {
        ExecResult r = conn->execute(
            "INSERT INTO bs_conf_parent (id, label, score) VALUES"
            " (1, 'alpha', 1.5), (2, 'beta', NULL), (3, 'gamma', -2.0)");
        CHECK(r.kind == ExecResult::Kind::Affected);
        CHECK(r.affected == 3);

        r = conn->execute(
            "SELECT id, label, score FROM bs_conf_parent ORDER BY id");
        REQUIRE(r.kind == ExecResult::Kind::Rows);
        REQUIRE(r.rows.size() == 3);
        CHECK(r.rows[0].begin().key() == "id");
        CHECK(r.rows[0]["id"] == 1);
        CHECK(r.rows[0]["label"] == "alpha");
        CHECK(r.rows[0]["score"] == doctest::Approx(1.5));
        CHECK(r.rows[1]["score"].is_null());
        CHECK(r.rows[2]["score"] == doctest::Approx(-2.0));
    }

    SUBCASE("updates and deletes report affected row counts") {
        conn->execute(
            "INSERT INTO bs_conf_parent (id, label) VALUES (1, 'a'), (2, 'b')");
        ExecResult r = conn->execute("UPDATE bs_conf_parent SET score = 7.0");
        CHECK(r.affected == 2);
        r = conn->execute("DELETE FROM bs_conf_parent WHERE id = 1");
        CHECK(r.affected == 1);
    }

    SUBCASE("transactions: rollback discards, commit persists") {
        conn->execute("INSERT INTO bs_conf_parent (id, label) VALUES (1, 'keep')");
        std::string before = dump_database(*conn);

        conn->txn_begin();
        conn->execute("INSERT INTO bs_conf_parent (id, label) VALUES (2, 'drop')");
        conn->execute("UPDATE bs_conf_parent SET label = 'mut' WHERE id = 1");
        conn->txn_rollback();
        CHECK(dump_database(*conn) == before);

        conn->txn_begin();
        conn->execute("INSERT INTO bs_conf_parent (id, label) VALUES (3, 'new')");
        conn->txn_commit();
        ExecResult r = conn->execute("SELECT count(*) AS n FROM bs_conf_parent");
        CHECK(r.rows[0]["n"] == 2);
    }

    SUBCASE("list_objects reports the created tables with lowercase names") {
        std::set<std::string> names;
        for (const ObjectRef& o : conn->list_objects()) names.insert(o.name);
        CHECK(names.count("bs_conf_parent") == 1);
        CHECK(names.count("bs_conf_child") == 1);
        CHECK(conn->capabilities().identifier_folding == IdentifierFolding::Lower);
    }

    SUBCASE("object_detail: columns, constraints, foreign keys, indexes") {
        ObjectDetail d =
            conn->object_detail(ObjectRef{"", "bs_conf_parent", ObjectKind::Table});
        REQUIRE(d.columns.size() == 3);
        CHECK(d.columns[0].name == "id");
        CHECK(d.columns[0].primary_key);
        CHECK(d.columns[1].name == "label");
        CHECK(d.columns[1].not_null);
        CHECK_FALSE(d.columns[2].not_null);
        bool has_label_idx = false;
        for (const IndexInfo& ix : d.indexes)
            if (ix.name == "bs_conf_label_idx") {
                has_label_idx = true;
                CHECK(ix.unique);
                REQUIRE(ix.columns.size() == 1);
                CHECK(ix.columns[0] == "label");
            }
        CHECK(has_label_idx);

        d = conn->object_detail(ObjectRef{"", "bs_conf_child", ObjectKind::Table});
        REQUIRE(d.foreign_keys.size() == 1);
        CHECK(d.foreign_keys[0].column == "parent_id");
        CHECK(d.foreign_keys[0].ref_table == "bs_conf_parent");
        CHECK(d.foreign_keys[0].ref_column == "id");
    }

    SUBCASE("distinct_values: distinct, null-free, cap honored") {
        conn->execute(
            "INSERT INTO bs_conf_parent (id, label, score) VALUES"
            " (1, 'x', 1), (2, 'y', 1), (3, 'z', NULL)");
        conn->execute(
            "INSERT INTO bs_conf_child (id, parent_id, note) VALUES"
            " (1, 1, 'dup'), (2, 1, 'dup'), (3, 2, NULL)");
        ColumnRef col{{"", "bs_conf_child", ObjectKind::Table}, "note"};
        DistinctValues v = conn->distinct_values(col, 10);
        CHECK(v.values == std::vector<std::string>{"dup"});
        CHECK_FALSE(v.truncated);

        ColumnRef labels{{"", "bs_conf_parent", ObjectKind::Table}, "label"};
        v = conn->distinct_values(labels, 2);
        CHECK(v.values.size() == 2);
        CHECK(v.truncated);
    }

    SUBCASE("introspected privileges cover the caller's own tables") {
        PrivilegeSet p = conn->introspect_privileges(user);
        ObjectRef parent{"", "bs_conf_parent", ObjectKind::Table};
        CHECK(p.allows(Action::Select, parent));
        CHECK(p.allows(Action::Insert, parent));
        CHECK(p.allows(Action::Drop, parent));
    }

    SUBCASE("database dump is deterministic and change-sensitive") {
        std::string d1 = dump_database(*conn);
        CHECK(d1 == dump_database(*conn));
        conn->execute("INSERT INTO bs_conf_parent (id, label) VALUES (9, 'q')");
        CHECK(dump_database(*conn) != d1);
    }

    conn->execute("DROP TABLE IF EXISTS bs_conf_child");
    conn->execute("DROP TABLE IF EXISTS bs_conf_parent");
}

}  // namespace

TEST_CASE("in-memory backend satisfies the conformance contract") {
    MemoryBackend backend;
    run_conformance(backend, "root");
}

#ifdef BRIDGESCOPE_HAVE_LIBPQ
TEST_CASE("postgres backend satisfies the conformance contract") {
    const char* url = std::getenv("BRIDGESCOPE_PG_URL");
    if (!url || !*url) {
        MESSAGE("BRIDGESCOPE_PG_URL not set; skipping the live PostgreSQL leg");
        return;
    }
    PostgresBackend backend(url, std::chrono::milliseconds(10000));
    run_conformance(backend, std::getenv("BRIDGESCOPE_PG_USER")
                                 ? std::getenv("BRIDGESCOPE_PG_USER")
                                 : "postgres");
}
#endif
