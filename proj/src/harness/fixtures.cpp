#include "bridgescope/harness/fixtures.hpp"

#include <random>
#include <sstream>

namespace bs::harness {
namespace {

const char* kChainStoreStatements[] = {
    "CREATE TABLE brand_a_items ("
    " id INTEGER PRIMARY KEY,"
    " name TEXT NOT NULL,"
    " category TEXT NOT NULL,"
    " price REAL NOT NULL)",
    "CREATE TABLE brand_a_sales ("
    " id TEXT PRIMARY KEY,"
    " date TEXT NOT NULL,"
    " item_id INTEGER NOT NULL,"
    " quantity INTEGER NOT NULL,"
    " amount REAL NOT NULL,"
    " FOREIGN KEY (item_id) REFERENCES brand_a_items(id))",
    "CREATE TABLE brand_a_refunds ("
    " id TEXT PRIMARY KEY,"
    " date TEXT NOT NULL,"
    " item_id INTEGER NOT NULL,"
    " amount REAL NOT NULL,"
    " FOREIGN KEY (item_id) REFERENCES brand_a_items(id))",
    "CREATE TABLE brand_b_items ("
    " id INTEGER PRIMARY KEY,"
    " name TEXT NOT NULL,"
    " category TEXT NOT NULL,"
    " price REAL NOT NULL)",
    "CREATE TABLE brand_b_sales ("
    " id TEXT PRIMARY KEY,"
    " date TEXT NOT NULL,"
    " item_id INTEGER NOT NULL,"
    " quantity INTEGER NOT NULL,"
    " amount REAL NOT NULL,"
    " FOREIGN KEY (item_id) REFERENCES brand_b_items(id))",
    "CREATE TABLE salaries ("
    " employee TEXT PRIMARY KEY,"
    " amount REAL NOT NULL)",
    "CREATE TABLE office_supplies ("
    " id INTEGER PRIMARY KEY,"
    " name TEXT NOT NULL,"
    " stock INTEGER NOT NULL)",
    "CREATE TABLE stores ("
    " id INTEGER PRIMARY KEY,"
    " name TEXT NOT NULL,"
    " street TEXT NOT NULL,"
    " city TEXT NOT NULL,"
    " region TEXT NOT NULL,"
    " opened_on TEXT NOT NULL,"
    " floor_space_sqm REAL NOT NULL,"
    " manager TEXT NOT NULL)",
    "CREATE TABLE customers ("
    " id INTEGER PRIMARY KEY,"
    " full_name TEXT NOT NULL,"
    " email TEXT NOT NULL UNIQUE,"
    " phone TEXT,"
    " street TEXT,"
    " city TEXT,"
    " loyalty_tier TEXT NOT NULL DEFAULT 'basic',"
    " signed_up_on TEXT NOT NULL)",
    "CREATE TABLE inventory ("
    " id INTEGER PRIMARY KEY,"
    " store_id INTEGER NOT NULL,"
    " brand TEXT NOT NULL,"
    " item_id INTEGER NOT NULL,"
    " on_hand INTEGER NOT NULL,"
    " reorder_level INTEGER NOT NULL,"
    " last_counted TEXT NOT NULL,"
    " FOREIGN KEY (store_id) REFERENCES stores(id))",
    "CREATE TABLE suppliers ("
    " id INTEGER PRIMARY KEY,"
    " name TEXT NOT NULL,"
    " contact_email TEXT NOT NULL,"
    " lead_time_days INTEGER NOT NULL,"
    " rating REAL NOT NULL)",

    "INSERT INTO brand_a_items (id, name, category, price) VALUES"
    " (1, 'wool coat', 'women', 120.0),"
    " (2, 'denim jacket', 'men', 80.0),"
    " (3, 'rain boots', 'kids', 35.0)",
    "INSERT INTO brand_a_sales (id, date, item_id, quantity, amount) VALUES"
    " ('a-1', '2025-06-01', 1, 2, 240.0),"
    " ('a-2', '2025-06-02', 2, 1, 80.0),"
    " ('a-3', '2025-06-03', 3, 4, 140.0)",
    "INSERT INTO brand_a_refunds (id, date, item_id, amount) VALUES"
    " ('r-1', '2025-06-02', 1, 120.0)",
    "INSERT INTO brand_b_items (id, name, category, price) VALUES"
    " (1, 'scarf', 'women', 25.0)",
    "INSERT INTO brand_b_sales (id, date, item_id, quantity, amount) VALUES"
    " ('b-1', '2025-06-01', 1, 3, 75.0)",
    "INSERT INTO salaries (employee, amount) VALUES"
    " ('alice', 5200.0), ('bob', 4800.0)",
    "INSERT INTO office_supplies (id, name, stock) VALUES"
    " (1, 'stapler', 12), (2, 'paper', 400)",
    "INSERT INTO stores (id, name, street, city, region, opened_on,"
    " floor_space_sqm, manager) VALUES"
    " (1, 'downtown', '12 Main St', 'Springfield', 'north', '2019-03-01', 820.0, 'carol'),"
    " (2, 'harbor', '3 Quay Rd', 'Portsmouth', 'south', '2021-09-15', 610.0, 'dave')",
    "INSERT INTO customers (id, full_name, email, phone, street, city,"
    " loyalty_tier, signed_up_on) VALUES"
    " (1, 'Jane Doe', 'jane@example.com', NULL, NULL, 'Springfield', 'gold', '2020-01-12'),"
    " (2, 'John Roe', 'john@example.com', '555-0100', '9 Elm St', 'Portsmouth', 'basic', '2023-05-30')",
    "INSERT INTO inventory (id, store_id, brand, item_id, on_hand,"
    " reorder_level, last_counted) VALUES"
    " (1, 1, 'a', 1, 14, 5, '2025-06-01'),"
    " (2, 1, 'a', 2, 3, 5, '2025-06-01'),"
    " (3, 2, 'b', 1, 40, 10, '2025-05-28')",
    "INSERT INTO suppliers (id, name, contact_email, lead_time_days, rating) VALUES"
    " (1, 'WoolWorks', 'sales@woolworks.example', 21, 4.5),"
    " (2, 'DenimCo', 'orders@denimco.example', 14, 3.9)",

    // admin: full privileges everywhere
    "GRANT ALL ON brand_a_items TO admin",
    "GRANT ALL ON brand_a_sales TO admin",
    "GRANT ALL ON brand_a_refunds TO admin",
    "GRANT ALL ON brand_b_items TO admin",
    "GRANT ALL ON brand_b_sales TO admin",
    "GRANT ALL ON salaries TO admin",
    "GRANT ALL ON office_supplies TO admin",
    "GRANT ALL ON stores TO admin",
    "GRANT ALL ON customers TO admin",
    "GRANT ALL ON inventory TO admin",
    "GRANT ALL ON suppliers TO admin",
    // analyst: read-only on brand A data
    "GRANT SELECT ON brand_a_items TO analyst",
    "GRANT SELECT ON brand_a_sales TO analyst",
    "GRANT SELECT ON brand_a_refunds TO analyst",
    // intern: task-unrelated table only
    "GRANT ALL ON office_supplies TO intern",
};

}  // namespace

Fixture chain_store_fixture() {
    Fixture f;
    for (const char* stmt : kChainStoreStatements) f.statements.emplace_back(stmt);
    return f;
}

Fixture housing_fixture(std::size_t rows, std::uint64_t seed) {
    Fixture f;
    f.statements.push_back(
        "CREATE TABLE house ("
        " id INTEGER PRIMARY KEY,"
        " longitude REAL NOT NULL,"
        " latitude REAL NOT NULL,"
        " housing_median_age REAL NOT NULL,"
        " total_rooms REAL NOT NULL,"
        " total_bedrooms REAL NOT NULL,"
        " population REAL NOT NULL,"
        " households REAL NOT NULL,"
        " median_income REAL NOT NULL,"
        " house_value REAL NOT NULL)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lon(-124.0, -114.0), lat(32.0, 42.0),
        age(1.0, 52.0), rooms(100.0, 8000.0), income(0.5, 15.0);
    std::uniform_real_distribution<double> noise(-0.5, 0.5);
    auto fixed = [](double v) {
        std::ostringstream s;
        s.precision(4);
        s << std::fixed << v;
        return s.str();
    };
    const std::size_t batch = 1000;
    for (std::size_t start = 0; start < rows; start += batch) {
        std::ostringstream stmt;
        stmt << "INSERT INTO house (id, longitude, latitude, housing_median_age,"
                " total_rooms, total_bedrooms, population, households,"
                " median_income, house_value) VALUES ";
        bool first = true;
        for (std::size_t i = start; i < std::min(start + batch, rows); ++i) {
            double inc = income(rng);
            double r = rooms(rng);
            // value correlates with income so the regression has signal
            double value = 0.8 + inc * 0.28 + noise(rng);
            if (!first) stmt << ",";
            stmt << "(" << i + 1 << "," << fixed(lon(rng)) << "," << fixed(lat(rng))
                 << "," << fixed(age(rng)) << "," << fixed(r) << ","
                 << fixed(r * 0.2) << "," << fixed(r * 0.55) << ","
                 << fixed(r * 0.18) << "," << fixed(inc) << "," << fixed(value)
                 << ")";
            first = false;
        }
        f.statements.push_back(stmt.str());
    }
    f.statements.push_back("GRANT ALL ON house TO admin");
    f.statements.push_back("GRANT SELECT ON house TO analyst");
    return f;
}

std::string fixture_to_sql(const Fixture& fixture) {
    std::ostringstream out;
    for (const std::string& stmt : fixture.statements) out << stmt << ";\n";
    return out.str();
}

void apply_fixture(Connection& conn, const Fixture& fixture) {
    conn.txn_begin();
    for (const std::string& stmt : fixture.statements) conn.execute(stmt);
    conn.txn_commit();
}

}  // namespace bs::harness
