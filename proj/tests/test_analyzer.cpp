#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "bridgescope/errors.hpp"
#include "bridgescope/sql_analyzer.hpp"

using namespace bs;

namespace {

AccessRequirement req(const std::string& name, Action action) {
    ObjectRef o;
    auto dot = name.find('.');
    if (dot != std::string::npos) {
        o.schema = name.substr(0, dot);
        o.name = name.substr(dot + 1);
    } else {
        o.name = name;
    }
    return {o, action};
}

struct Case {
    const char* sql;
    Action action;
    std::vector<AccessRequirement> requirements;
};

// Hand-enumerated oracle: for each statement, the action and the exact
// (object, action) set, worked out from the statement text alone.
const std::vector<Case> kCorpus = {
    // plain reads
    {"SELECT id, name FROM users", Action::Select, {req("users", Action::Select)}},
    {"SELECT u.id, o.total FROM users u JOIN orders o ON o.user_id = u.id",
     Action::Select, {req("users", Action::Select), req("orders", Action::Select)}},
    {"SELECT id FROM users WHERE id IN (SELECT user_id FROM orders WHERE total > 10)",
     Action::Select, {req("users", Action::Select), req("orders", Action::Select)}},
    {"SELECT * FROM sales.fact_orders", Action::Select,
     {req("sales.fact_orders", Action::Select)}},
    {"WITH t AS (SELECT id FROM orders) SELECT * FROM t JOIN users ON users.id = t.id",
     Action::Select, {req("orders", Action::Select), req("users", Action::Select)}},
    {"SELECT (SELECT max(total) FROM orders), name FROM users", Action::Select,
     {req("orders", Action::Select), req("users", Action::Select)}},
    {"SELECT id FROM a UNION ALL SELECT id FROM b", Action::Select,
     {req("a", Action::Select), req("b", Action::Select)}},
    {"SELECT * FROM users u, LATERAL (SELECT * FROM orders o WHERE o.user_id = u.id) x",
     Action::Select, {req("users", Action::Select), req("orders", Action::Select)}},
    {"SELECT count(*) FROM only inventory GROUP BY brand HAVING count(*) > 2",
     Action::Select, {req("inventory", Action::Select)}},
    {"SELECT \"Weird Name\".\"Col\" FROM \"Weird Name\"", Action::Select,
     {req("Weird Name", Action::Select)}},
    {"SELECT /* c1 */ body FROM notes WHERE tag = $tag$x$tag$ -- trailing",
     Action::Select, {req("notes", Action::Select)}},
    {"SELECT * FROM msgs WHERE body = E'a\\'b' AND id = $1", Action::Select,
     {req("msgs", Action::Select)}},
    {"SELECT 1", Action::Select, {}},
    // row locking
    {"SELECT * FROM accounts WHERE id = 1 FOR UPDATE", Action::Select,
     {req("accounts", Action::Select), req("accounts", Action::Update)}},
    {"SELECT * FROM accounts a JOIN audit b ON b.aid = a.id FOR UPDATE OF a",
     Action::Select,
     {req("accounts", Action::Select), req("audit", Action::Select),
      req("accounts", Action::Update)}},
    // writes
    {"INSERT INTO logs (msg) VALUES ('hi')", Action::Insert,
     {req("logs", Action::Insert)}},
    {"INSERT INTO archive_orders SELECT * FROM orders WHERE total < 5",
     Action::Insert,
     {req("archive_orders", Action::Insert), req("orders", Action::Select)}},
    {"INSERT INTO kv (k, v) VALUES ('a', 1) ON CONFLICT (k) DO UPDATE SET v = excluded.v",
     Action::Insert, {req("kv", Action::Insert), req("kv", Action::Update)}},
    {"UPDATE users SET name = 'x' WHERE id = 3", Action::Update,
     {req("users", Action::Update)}},
    {"UPDATE orders SET total = total * 0.9 FROM promotions p WHERE p.order_id = orders.id",
     Action::Update,
     {req("orders", Action::Update), req("promotions", Action::Select)}},
    {"UPDATE users SET rank = (SELECT count(*) FROM orders WHERE orders.user_id = users.id)",
     Action::Update, {req("users", Action::Update), req("orders", Action::Select)}},
    {"DELETE FROM sessions WHERE expires_at < now()", Action::Delete,
     {req("sessions", Action::Delete)}},
    {"DELETE FROM orders USING blacklist b WHERE orders.user_id = b.user_id",
     Action::Delete, {req("orders", Action::Delete), req("blacklist", Action::Select)}},
    {"DELETE FROM carts WHERE EXISTS (SELECT 1 FROM users WHERE users.id = carts.user_id)",
     Action::Delete, {req("carts", Action::Delete), req("users", Action::Select)}},
    // DDL
    {"CREATE TABLE t1 (id integer PRIMARY KEY, name text)", Action::Create,
     {req("t1", Action::Create)}},
    {"CREATE TABLE snap AS SELECT * FROM orders", Action::Create,
     {req("snap", Action::Create), req("orders", Action::Select)}},
    {"CREATE VIEW v_users AS SELECT id, name FROM users", Action::Create,
     {req("v_users", Action::Create), req("users", Action::Select)}},
    {"CREATE UNIQUE INDEX idx_users_email ON users (email)", Action::Create,
     {req("users", Action::Create)}},
    {"DROP TABLE IF EXISTS old_logs", Action::Drop, {req("old_logs", Action::Drop)}},
    {"ALTER TABLE users ADD COLUMN age integer", Action::Alter,
     {req("users", Action::Alter)}},
    {"TRUNCATE TABLE audit_log", Action::Truncate,
     {req("audit_log", Action::Truncate)}},
};

std::string describe(const std::set<AccessRequirement>& reqs) {
    std::string out;
    for (const auto& r : reqs)
        out += r.object.qualified_name() + ":" + action_name(r.action) + " ";
    return out;
}

}  // namespace

TEST_CASE("statement corpus: action and requirement sets match the oracle") {
    REQUIRE(kCorpus.size() >= 30);
    for (const Case& c : kCorpus) {
        CAPTURE(c.sql);
        ParsedStatement parsed = sql::parse(c.sql);
        CHECK(parsed.action == c.action);
        std::set<AccessRequirement> expected(c.requirements.begin(),
                                             c.requirements.end());
        CHECK_MESSAGE(parsed.requirements == expected,
                      "got: ", describe(parsed.requirements),
                      " want: ", describe(expected));
    }
}

TEST_CASE("identifier folding: unquoted lower-cased, quoted verbatim") {
    ParsedStatement p = sql::parse("SELECT * FROM PUBLIC.Users");
    REQUIRE(p.requirements.size() == 1);
    CHECK(p.requirements.begin()->object.qualified_name() == "public.users");
    p = sql::parse("SELECT * FROM \"PUBLIC\".\"Users\"");
    CHECK(p.requirements.begin()->object.qualified_name() == "PUBLIC.Users");
}

TEST_CASE("trailing semicolon is tolerated, statement lists are not") {
    CHECK(sql::parse("SELECT 1;").action == Action::Select);
    CHECK(sql::parse("SELECT 1 ; \n").action == Action::Select);
    CHECK_THROWS_AS(sql::parse("SELECT 1; SELECT 2"), MultiStatementError);
    CHECK_THROWS_AS(sql::parse("DELETE FROM t; --x\nDROP TABLE t"),
                    MultiStatementError);
    // a semicolon inside a string literal is data, not a separator
    CHECK(sql::parse("SELECT * FROM t WHERE x = 'a; b'").action == Action::Select);
}

TEST_CASE("data-modifying CTEs are rejected outright") {
    CHECK_THROWS_AS(sql::parse("WITH d AS (DELETE FROM t RETURNING *) SELECT * FROM d"),
                    SyntaxError);
    CHECK_THROWS_AS(
        sql::parse("WITH i AS (INSERT INTO t VALUES (1) RETURNING id) SELECT * FROM i"),
        SyntaxError);
}

TEST_CASE("CTE names shadow tables only within their statement") {
    ParsedStatement p = sql::parse(
        "WITH users AS (SELECT 1 AS id) SELECT * FROM users");
    CHECK(p.requirements.empty());  // refers to the CTE, not the table
    p = sql::parse("SELECT * FROM users");
    CHECK(p.requirements.size() == 1);
}

TEST_CASE("transaction-control and administrative verbs classify without requirements") {
    CHECK(sql::classify_only("BEGIN") == Action::Begin);
    CHECK(sql::classify_only("START TRANSACTION") == Action::Begin);
    CHECK(sql::classify_only("BEGIN TRANSACTION ISOLATION LEVEL SERIALIZABLE") ==
          Action::Begin);
    CHECK(sql::classify_only("COMMIT") == Action::Commit);
    CHECK(sql::classify_only("END") == Action::Commit);
    CHECK(sql::classify_only("ROLLBACK") == Action::Rollback);
    CHECK(sql::classify_only("GRANT SELECT ON t TO u") == Action::Other);
    CHECK(sql::classify_only("SET search_path TO public") == Action::Other);
    CHECK(sql::classify_only("EXPLAIN SELECT 1") == Action::Other);
    CHECK(sql::parse("VACUUM").requirements.empty());
}

TEST_CASE("garbage and unsupported constructs are syntax errors") {
    CHECK_THROWS_AS(sql::parse(""), SyntaxError);
    CHECK_THROWS_AS(sql::parse("   \n\t "), SyntaxError);
    CHECK_THROWS_AS(sql::parse("FLY ME TO THE MOON"), SyntaxError);
    CHECK_THROWS_AS(sql::parse("SELECT * FROM"), SyntaxError);
    CHECK_THROWS_AS(sql::parse("SELECT id INTO copy FROM t"), SyntaxError);
    CHECK_THROWS_AS(sql::parse("INSERT INTO"), SyntaxError);
}

TEST_CASE("nested block comments and dollar quoting do not confuse the tokenizer") {
    ParsedStatement p = sql::parse(
        "SELECT /* a /* nested */ b */ x FROM t WHERE y = $$; DROP TABLE t;$$");
    CHECK(p.action == Action::Select);
    REQUIRE(p.requirements.size() == 1);
    CHECK(p.requirements.begin()->object.name == "t");
}

TEST_CASE("determinism: repeated parses agree") {
    for (const Case& c : kCorpus) {
        ParsedStatement a = sql::parse(c.sql);
        ParsedStatement b = sql::parse(c.sql);
        CHECK(a.action == b.action);
        CHECK(a.requirements == b.requirements);
    }
}
