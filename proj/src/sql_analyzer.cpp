#include "bridgescope/sql_analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "bridgescope/errors.hpp"

namespace bs::sql {
namespace {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class TokKind { Ident, QuotedIdent, Number, String, Symbol, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;  // idents folded to lower case; quoted idents verbatim
    size_t pos = 0;
};

[[noreturn]] void fail(const std::string& msg, size_t pos) {
    throw SyntaxError(msg + " (at offset " + std::to_string(pos) + ")");
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string fold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<Token> tokenize(std::string_view sql) {
    std::vector<Token> toks;
    size_t i = 0;
    const size_t n = sql.size();
    while (i < n) {
        char c = sql[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        // line comment
        if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
            while (i < n && sql[i] != '\n') ++i;
            continue;
        }
        // block comment, nested per PostgreSQL
        if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
            size_t start = i;
            int depth = 1;
            i += 2;
            while (i < n && depth > 0) {
                if (sql[i] == '/' && i + 1 < n && sql[i + 1] == '*') {
                    ++depth;
                    i += 2;
                } else if (sql[i] == '*' && i + 1 < n && sql[i + 1] == '/') {
                    --depth;
                    i += 2;
                } else {
                    ++i;
                }
            }
            if (depth != 0) fail("unterminated block comment", start);
            continue;
        }
        // string literal, optionally E-prefixed
        bool escape_string = false;
        if ((c == 'e' || c == 'E') && i + 1 < n && sql[i + 1] == '\'') {
            escape_string = true;
            ++i;
            c = '\'';
        }
        if (c == '\'') {
            size_t start = i++;
            std::string text;
            bool closed = false;
            while (i < n) {
                if (escape_string && sql[i] == '\\' && i + 1 < n) {
                    text += sql[i + 1];
                    i += 2;
                    continue;
                }
                if (sql[i] == '\'') {
                    if (i + 1 < n && sql[i + 1] == '\'') {  // doubled quote
                        text += '\'';
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                text += sql[i++];
            }
            if (!closed) fail("unterminated string literal", start);
            toks.push_back({TokKind::String, std::move(text), start});
            continue;
        }
        // dollar-quoted string or positional parameter
        if (c == '$') {
            size_t start = i;
            size_t j = i + 1;
            if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
                while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
                toks.push_back({TokKind::Number, std::string(sql.substr(i, j - i)), start});
                i = j;
                continue;
            }
            while (j < n && is_ident_char(sql[j]) && sql[j] != '$') ++j;
            if (j < n && sql[j] == '$') {
                std::string tag(sql.substr(i, j - i + 1));  // "$tag$"
                size_t body = j + 1;
                size_t end = sql.find(tag, body);
                if (end == std::string_view::npos)
                    fail("unterminated dollar-quoted string", start);
                toks.push_back({TokKind::String,
                                std::string(sql.substr(body, end - body)), start});
                i = end + tag.size();
                continue;
            }
            fail("unexpected character '$'", i);
        }
        // quoted identifier
        if (c == '"') {
            size_t start = i++;
            std::string text;
            bool closed = false;
            while (i < n) {
                if (sql[i] == '"') {
                    if (i + 1 < n && sql[i + 1] == '"') {
                        text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                text += sql[i++];
            }
            if (!closed) fail("unterminated quoted identifier", start);
            if (text.empty()) fail("empty quoted identifier", start);
            toks.push_back({TokKind::QuotedIdent, std::move(text), start});
            continue;
        }
        if (is_ident_start(c)) {
            size_t start = i;
            while (i < n && is_ident_char(sql[i])) ++i;
            toks.push_back({TokKind::Ident, fold(sql.substr(start, i - start)), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
            size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(sql[i])) ||
                             sql[i] == '.' ||
                             ((sql[i] == '+' || sql[i] == '-') && i > start &&
                              (sql[i - 1] == 'e' || sql[i - 1] == 'E'))))
                ++i;
            toks.push_back({TokKind::Number, std::string(sql.substr(start, i - start)), start});
            continue;
        }
        static const std::string punct = "(),;.*=<>+-/%^~!@#&|?[]:";
        if (punct.find(c) != std::string::npos) {
            toks.push_back({TokKind::Symbol, std::string(1, c), i});
            ++i;
            continue;
        }
        fail(std::string("unexpected character '") + c + "'", i);
    }
    toks.push_back({TokKind::End, "", n});
    return toks;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct FromEntry {
    std::string effective_name;  // alias if present, else bare relation name
    std::optional<ObjectRef> relation;  // nullopt for subqueries / CTE refs
};

class Parser {
public:
    explicit Parser(std::string_view sql) : toks_(tokenize(sql)) {}

    ParsedStatement run(std::string_view raw) {
        ParsedStatement stmt;
        stmt.raw_text = std::string(raw);
        if (cur().kind == TokKind::End) throw SyntaxError("empty statement");
        stmt.action = parse_statement();
        // tolerate trailing semicolons, reject anything beyond
        while (is_symbol(";")) advance();
        if (cur().kind != TokKind::End)
            throw MultiStatementError(
                "input contains more than one statement; statement lists are "
                "rejected, submit one statement per call");
        stmt.requirements = std::move(reqs_);
        return stmt;
    }

private:
    std::vector<Token> toks_;
    size_t idx_ = 0;
    std::set<AccessRequirement> reqs_;
    std::vector<std::vector<std::string>> cte_scopes_;

    const Token& cur() const { return toks_[idx_]; }
    const Token& peek(size_t k = 1) const {
        return toks_[std::min(idx_ + k, toks_.size() - 1)];
    }
    void advance() {
        if (idx_ + 1 < toks_.size()) ++idx_;
    }

    bool is_kw(const char* kw) const {
        return cur().kind == TokKind::Ident && cur().text == kw;
    }
    bool is_symbol(const char* s) const {
        return cur().kind == TokKind::Symbol && cur().text == s;
    }
    bool accept_kw(const char* kw) {
        if (!is_kw(kw)) return false;
        advance();
        return true;
    }
    void expect_kw(const char* kw) {
        if (!accept_kw(kw)) fail(std::string("expected '") + kw + "'", cur().pos);
    }
    void expect_symbol(const char* s) {
        if (!is_symbol(s)) fail(std::string("expected '") + s + "'", cur().pos);
        advance();
    }

    bool in_cte_scope(const std::string& name) const {
        for (const auto& scope : cte_scopes_)
            if (std::find(scope.begin(), scope.end(), name) != scope.end()) return true;
        return false;
    }

    void require(const ObjectRef& o, Action a) { reqs_.insert({o, a}); }

    // name or schema.name (a third dot segment, catalog-qualified, is rejected)
    ObjectRef parse_object_name(ObjectKind kind) {
        if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
            fail("expected object name", cur().pos);
        std::string first = cur().text;
        advance();
        ObjectRef o;
        o.kind = kind;
        if (is_symbol(".")) {
            advance();
            if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
                fail("expected identifier after '.'", cur().pos);
            o.schema = first;
            o.name = cur().text;
            advance();
            if (is_symbol(".")) fail("catalog-qualified names are not supported", cur().pos);
        } else {
            o.name = first;
        }
        return o;
    }

    bool at_select_start() const {
        return is_kw("select") || is_kw("with") || is_kw("values");
    }

    // Generic expression scan: consumes tokens, balancing parentheses and
    // recursing into any parenthesized subquery, until one of the stop
    // keywords (or ',' when stop_on_comma) appears at the entry depth, or an
    // unmatched ')' / ';' / end of input is reached.
    void scan_expression(const std::vector<const char*>& stop_keywords,
                         bool stop_on_comma = false) {
        while (true) {
            const Token& t = cur();
            if (t.kind == TokKind::End) return;
            if (t.kind == TokKind::Symbol) {
                if (t.text == ";" || t.text == ")") return;
                if (t.text == "," && stop_on_comma) return;
                if (t.text == "(") {
                    advance();
                    if (at_select_start()) {
                        parse_select_body();
                    } else {
                        scan_expression({});  // balanced contents
                    }
                    expect_symbol(")");
                    continue;
                }
                advance();
                continue;
            }
            if (t.kind == TokKind::Ident) {
                for (const char* kw : stop_keywords)
                    if (t.text == kw) return;
            }
            advance();
        }
    }

    // WITH name [(cols)] AS [[NOT] MATERIALIZED] ( select ) [, ...]
    // Data-modifying CTE bodies are rejected: a statement that both reads and
    // writes cannot be classified by a single action tool.
    void parse_with_clause() {
        expect_kw("with");
        accept_kw("recursive");
        cte_scopes_.emplace_back();
        while (true) {
            if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
                fail("expected CTE name", cur().pos);
            cte_scopes_.back().push_back(cur().text);
            advance();
            if (is_symbol("(")) {  // column alias list
                advance();
                scan_expression({});
                expect_symbol(")");
            }
            expect_kw("as");
            if (accept_kw("not")) expect_kw("materialized");
            else accept_kw("materialized");
            expect_symbol("(");
            if (is_kw("insert") || is_kw("update") || is_kw("delete"))
                fail("data-modifying CTEs are not supported", cur().pos);
            if (!at_select_start()) fail("expected subquery in CTE body", cur().pos);
            parse_select_body();
            expect_symbol(")");
            if (!is_symbol(",")) break;
            advance();
        }
    }

    void pop_cte_scope(size_t depth_before) {
        while (cte_scopes_.size() > depth_before) cte_scopes_.pop_back();
    }

    Action parse_statement() {
        size_t scope_depth = cte_scopes_.size();
        if (is_kw("with")) {
            parse_with_clause();
            Action a;
            if (at_select_start()) {
                parse_select_body();
                a = Action::Select;
            } else if (is_kw("insert")) {
                a = parse_insert();
            } else if (is_kw("update")) {
                a = parse_update();
            } else if (is_kw("delete")) {
                a = parse_delete();
            } else {
                fail("expected statement after WITH clause", cur().pos);
            }
            pop_cte_scope(scope_depth);
            return a;
        }
        if (at_select_start() || is_symbol("(")) {
            parse_select_body();
            return Action::Select;
        }
        if (is_kw("insert")) return parse_insert();
        if (is_kw("update")) return parse_update();
        if (is_kw("delete")) return parse_delete();
        if (is_kw("create")) return parse_create();
        if (is_kw("drop")) return parse_drop();
        if (is_kw("alter")) return parse_alter();
        if (is_kw("truncate")) return parse_truncate();
        if (is_kw("begin") || is_kw("start")) return parse_begin();
        if (is_kw("commit") || is_kw("end")) {
            skip_to_statement_end();
            return Action::Commit;
        }
        if (is_kw("rollback")) {
            skip_to_statement_end();
            return Action::Rollback;
        }
        // recognized administrative verbs the action tools never run
        for (const char* kw : {"grant", "revoke", "set", "show", "reset",
                               "vacuum", "analyze", "explain", "comment"}) {
            if (is_kw(kw)) {
                skip_to_statement_end();
                return Action::Other;
            }
        }
        fail("unsupported or unrecognized statement", cur().pos);
    }

    void skip_to_statement_end() {
        while (cur().kind != TokKind::End && !is_symbol(";")) {
            if (is_symbol("(")) {
                advance();
                scan_expression({});
                expect_symbol(")");
            } else {
                advance();
            }
        }
    }

    // --- SELECT -----------------------------------------------------------

    // One select body: [WITH ...] SELECT ... | VALUES ... | (select), with
    // set operations, ORDER BY/LIMIT tail and row-locking clause.
    void parse_select_body() {
        size_t scope_depth = cte_scopes_.size();
        if (is_kw("with")) parse_with_clause();
        parse_select_core();
        while (is_kw("union") || is_kw("intersect") || is_kw("except")) {
            advance();
            if (accept_kw("all")) {
            } else {
                accept_kw("distinct");
            }
            parse_select_core();
        }
        // ORDER BY / LIMIT / OFFSET / FETCH tail. ON and RETURNING cannot
        // appear bare at paren depth 0 inside these clauses, so they are safe
        // stops for the enclosing INSERT's ON CONFLICT / RETURNING.
        scan_expression({"for", "on", "returning"});
        parse_locking_tail();
        pop_cte_scope(scope_depth);
    }

    std::vector<FromEntry> current_from_;

    void parse_select_core() {
        if (is_symbol("(")) {
            advance();
            parse_select_body();
            expect_symbol(")");
            return;
        }
        if (accept_kw("values")) {
            scan_expression({"union", "intersect", "except", "order", "limit",
                             "offset", "fetch", "for", "on", "returning"});
            return;
        }
        expect_kw("select");
        if (accept_kw("distinct")) {
            if (accept_kw("on")) {
                expect_symbol("(");
                scan_expression({});
                expect_symbol(")");
            }
        } else {
            accept_kw("all");
        }
        // select list
        scan_expression({"from", "where", "group", "having", "window", "order",
                         "limit", "offset", "fetch", "union", "intersect",
                         "except", "for", "into"});
        if (is_kw("into")) fail("SELECT INTO is not supported", cur().pos);
        std::vector<FromEntry> entries;
        if (accept_kw("from")) entries = parse_from_list();
        // remaining clauses up to set-op / tail
        scan_expression({"union", "intersect", "except", "order", "limit",
                         "offset", "fetch", "for", "on", "returning"});
        current_from_ = std::move(entries);
    }

    // FOR UPDATE | NO KEY UPDATE | SHARE | KEY SHARE [OF names] [NOWAIT|SKIP LOCKED]
    // Row locks need UPDATE privilege on the locked relations.
    void parse_locking_tail() {
        while (is_kw("for")) {
            advance();
            if (accept_kw("update")) {
            } else if (accept_kw("no")) {
                expect_kw("key");
                expect_kw("update");
            } else if (accept_kw("share")) {
            } else if (accept_kw("key")) {
                expect_kw("share");
            } else {
                fail("expected row-locking clause after FOR", cur().pos);
            }
            std::vector<std::string> of_names;
            if (accept_kw("of")) {
                while (true) {
                    if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
                        fail("expected relation name in FOR ... OF", cur().pos);
                    of_names.push_back(cur().text);
                    advance();
                    if (!is_symbol(",")) break;
                    advance();
                }
            }
            if (accept_kw("nowait")) {
            } else if (accept_kw("skip")) {
                expect_kw("locked");
            }
            for (const FromEntry& e : current_from_) {
                if (!e.relation) continue;
                if (!of_names.empty() &&
                    std::find(of_names.begin(), of_names.end(), e.effective_name) ==
                        of_names.end())
                    continue;
                require(*e.relation, Action::Update);
            }
        }
    }

    std::vector<FromEntry> parse_from_list() {
        std::vector<FromEntry> entries;
        while (true) {
            parse_table_expr(entries);
            if (!is_symbol(",")) break;
            advance();
        }
        return entries;
    }

    void parse_table_expr(std::vector<FromEntry>& entries) {
        parse_table_primary(entries);
        while (true) {
            if (is_kw("join") || is_kw("inner") || is_kw("left") || is_kw("right") ||
                is_kw("full") || is_kw("cross")) {
                bool cross = is_kw("cross");
                while (!accept_kw("join")) {
                    if (cur().kind != TokKind::Ident) fail("expected JOIN", cur().pos);
                    advance();  // inner/left/right/full/cross/outer
                }
                parse_table_primary(entries);
                if (!cross) {
                    if (accept_kw("on")) {
                        scan_expression({"join", "inner", "left", "right", "full",
                                         "cross", "natural", "where", "group", "having",
                                         "window", "order", "limit", "offset", "fetch",
                                         "union", "intersect", "except", "for",
                                         "returning", "using"},
                                        /*stop_on_comma=*/true);
                    } else if (accept_kw("using")) {
                        expect_symbol("(");
                        scan_expression({});
                        expect_symbol(")");
                    }
                }
                continue;
            }
            if (is_kw("natural")) {
                advance();
                while (!accept_kw("join")) {
                    if (cur().kind != TokKind::Ident) fail("expected JOIN", cur().pos);
                    advance();
                }
                parse_table_primary(entries);
                continue;
            }
            break;
        }
    }

    void parse_table_primary(std::vector<FromEntry>& entries) {
        accept_kw("lateral");
        if (is_symbol("(")) {
            advance();
            if (at_select_start()) {
                parse_select_body();
                expect_symbol(")");
                FromEntry e;
                e.effective_name = parse_alias();
                entries.push_back(std::move(e));
            } else {
                // parenthesized join expression
                parse_table_expr(entries);
                expect_symbol(")");
                parse_alias();
            }
            return;
        }
        accept_kw("only");
        if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
            fail("expected relation in FROM clause", cur().pos);
        // set-returning function call? not a relation requirement
        if ((peek().kind == TokKind::Symbol && peek().text == "(") ||
            (peek().kind == TokKind::Symbol && peek().text == "." &&
             peek(2).kind == TokKind::Ident && peek(3).kind == TokKind::Symbol &&
             peek(3).text == "(")) {
            // consume qualified name then balanced call parens
            advance();
            if (is_symbol(".")) {
                advance();
                advance();
            }
            expect_symbol("(");
            scan_expression({});
            expect_symbol(")");
            FromEntry e;
            e.effective_name = parse_alias();
            entries.push_back(std::move(e));
            return;
        }
        ObjectRef o = parse_object_name(ObjectKind::Unknown);
        FromEntry e;
        std::string alias = parse_alias();
        e.effective_name = alias.empty() ? o.name : alias;
        if (o.schema.empty() && in_cte_scope(o.name)) {
            entries.push_back(std::move(e));  // CTE reference, not a database object
            return;
        }
        require(o, Action::Select);
        e.relation = std::move(o);
        entries.push_back(std::move(e));
    }

    // reserved words that terminate an implicit alias position
    bool alias_blocked() const {
        static const char* stop[] = {
            "on",     "using",  "join",   "inner",  "left",    "right",  "full",
            "cross",  "natural", "where", "group",  "having",  "window", "order",
            "limit",  "offset", "fetch",  "union",  "intersect", "except", "for",
            "set",    "returning", "values", "from"};
        for (const char* kw : stop)
            if (is_kw(kw)) return true;
        return false;
    }

    std::string parse_alias() {
        std::string alias;
        if (accept_kw("as")) {
            if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
                fail("expected alias after AS", cur().pos);
            alias = cur().text;
            advance();
        } else if ((cur().kind == TokKind::Ident || cur().kind == TokKind::QuotedIdent) &&
                   !alias_blocked()) {
            alias = cur().text;
            advance();
        }
        if (is_symbol("(")) {  // column alias list
            advance();
            scan_expression({});
            expect_symbol(")");
        }
        return alias;
    }

    // --- DML --------------------------------------------------------------

    Action parse_insert() {
        expect_kw("insert");
        expect_kw("into");
        ObjectRef target = parse_object_name(ObjectKind::Table);
        require(target, Action::Insert);
        if (accept_kw("as")) {
            if (cur().kind != TokKind::Ident && cur().kind != TokKind::QuotedIdent)
                fail("expected alias after AS", cur().pos);
            advance();
        }
        if (is_symbol("(")) {  // column list
            advance();
            scan_expression({});
            expect_symbol(")");
        }
        if (accept_kw("default")) {
            expect_kw("values");
        } else if (at_select_start() || is_symbol("(")) {
            parse_select_body();
        } else {
            fail("expected VALUES or SELECT in INSERT", cur().pos);
        }
        if (is_kw("on")) {  // ON CONFLICT; DO UPDATE needs UPDATE privilege
            advance();
            expect_kw("conflict");
            while (cur().kind != TokKind::End && !is_kw("do")) {
                if (is_symbol("(")) {
                    advance();
                    scan_expression({});
                    expect_symbol(")");
                } else {
                    advance();
                }
            }
            expect_kw("do");
            if (accept_kw("nothing")) {
            } else {
                expect_kw("update");
                expect_kw("set");
                require(target, Action::Update);
                scan_expression({"where", "returning"});
                if (accept_kw("where")) scan_expression({"returning"});
            }
        }
        if (accept_kw("returning")) scan_expression({});
        return Action::Insert;
    }

    Action parse_update() {
        expect_kw("update");
        accept_kw("only");
        ObjectRef target = parse_object_name(ObjectKind::Table);
        require(target, Action::Update);
        parse_alias();
        expect_kw("set");
        scan_expression({"from", "where", "returning"});
        if (accept_kw("from")) parse_from_list();
        if (accept_kw("where")) scan_expression({"returning"});
        if (accept_kw("returning")) scan_expression({});
        return Action::Update;
    }

    Action parse_delete() {
        expect_kw("delete");
        expect_kw("from");
        accept_kw("only");
        ObjectRef target = parse_object_name(ObjectKind::Table);
        require(target, Action::Delete);
        parse_alias();
        if (accept_kw("using")) parse_from_list();
        if (accept_kw("where")) scan_expression({"returning"});
        if (accept_kw("returning")) scan_expression({});
        return Action::Delete;
    }

    // --- DDL --------------------------------------------------------------

    Action parse_create() {
        expect_kw("create");
        if (accept_kw("or")) expect_kw("replace");
        bool unique_index = false;
        if (accept_kw("unique")) unique_index = true;
        while (is_kw("temp") || is_kw("temporary") || is_kw("unlogged") ||
               is_kw("materialized"))
            advance();
        if (accept_kw("table")) {
            skip_if_not_exists();
            ObjectRef o = parse_object_name(ObjectKind::Table);
            require(o, Action::Create);
            if (is_symbol("(")) {
                advance();
                scan_expression({});
                expect_symbol(")");
            }
            if (accept_kw("as")) {
                if (!at_select_start() && !is_symbol("("))
                    fail("expected subquery after CREATE TABLE AS", cur().pos);
                parse_select_body();
            }
            skip_to_statement_end();
            return Action::Create;
        }
        if (accept_kw("view")) {
            skip_if_not_exists();
            ObjectRef o = parse_object_name(ObjectKind::View);
            require(o, Action::Create);
            if (is_symbol("(")) {
                advance();
                scan_expression({});
                expect_symbol(")");
            }
            expect_kw("as");
            parse_select_body();
            return Action::Create;
        }
        if (accept_kw("sequence")) {
            skip_if_not_exists();
            require(parse_object_name(ObjectKind::Sequence), Action::Create);
            skip_to_statement_end();
            return Action::Create;
        }
        if (accept_kw("database")) {
            require(parse_object_name(ObjectKind::Unknown), Action::Create);
            skip_to_statement_end();
            return Action::Create;
        }
        if (unique_index || is_kw("index")) {
            expect_kw("index");
            // index lives on its table; creating one requires CREATE there too
            accept_kw("concurrently");
            skip_if_not_exists();
            if ((cur().kind == TokKind::Ident || cur().kind == TokKind::QuotedIdent) &&
                !is_kw("on")) {
                parse_object_name(ObjectKind::Unknown);  // index name
            }
            expect_kw("on");
            accept_kw("only");
            require(parse_object_name(ObjectKind::Table), Action::Create);
            skip_to_statement_end();
            return Action::Create;
        }
        fail("unsupported CREATE target", cur().pos);
    }

    void skip_if_not_exists() {
        if (is_kw("if")) {
            advance();
            expect_kw("not");
            expect_kw("exists");
        }
    }
    void skip_if_exists() {
        if (is_kw("if")) {
            advance();
            expect_kw("exists");
        }
    }

    Action parse_drop() {
        expect_kw("drop");
        ObjectKind kind = ObjectKind::Unknown;
        if (accept_kw("table")) kind = ObjectKind::Table;
        else if (accept_kw("view")) kind = ObjectKind::View;
        else if (accept_kw("sequence")) kind = ObjectKind::Sequence;
        else if (accept_kw("database")) kind = ObjectKind::Unknown;
        else if (accept_kw("materialized")) {
            expect_kw("view");
            kind = ObjectKind::View;
        } else {
            fail("unsupported DROP target", cur().pos);
        }
        skip_if_exists();
        while (true) {
            require(parse_object_name(kind), Action::Drop);
            if (!is_symbol(",")) break;
            advance();
        }
        accept_kw("cascade") || accept_kw("restrict");
        return Action::Drop;
    }

    Action parse_alter() {
        expect_kw("alter");
        if (accept_kw("table")) {
            skip_if_exists();
            accept_kw("only");
            require(parse_object_name(ObjectKind::Table), Action::Alter);
            skip_to_statement_end();
            return Action::Alter;
        }
        if (accept_kw("view")) {
            skip_if_exists();
            require(parse_object_name(ObjectKind::View), Action::Alter);
            skip_to_statement_end();
            return Action::Alter;
        }
        if (accept_kw("sequence")) {
            skip_if_exists();
            require(parse_object_name(ObjectKind::Sequence), Action::Alter);
            skip_to_statement_end();
            return Action::Alter;
        }
        fail("unsupported ALTER target", cur().pos);
    }

    Action parse_truncate() {
        expect_kw("truncate");
        accept_kw("table");
        while (true) {
            accept_kw("only");
            require(parse_object_name(ObjectKind::Table), Action::Truncate);
            if (!is_symbol(",")) break;
            advance();
        }
        skip_to_statement_end();  // RESTART IDENTITY / CASCADE etc.
        return Action::Truncate;
    }

    Action parse_begin() {
        if (accept_kw("start")) {
            expect_kw("transaction");
        } else {
            expect_kw("begin");
            accept_kw("work") || accept_kw("transaction");
        }
        skip_to_statement_end();  // isolation modes
        return Action::Begin;
    }
};

}  // namespace

ParsedStatement parse(std::string_view sql_text) {
    if (sql_text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw SyntaxError("empty statement");
    Parser p(sql_text);
    return p.run(sql_text);
}

Action classify_only(std::string_view sql_text) {
    return parse(sql_text).action;
}

}  // namespace bs::sql
