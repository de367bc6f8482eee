#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bridgescope/backend.hpp"

namespace bs::harness {

struct Fixture {
    std::vector<std::string> statements;
};

// Chain-store scenario: brand A/B items, sales and refunds, a sensitive
// salaries table and an unrelated office_supplies table, plus grants for the
// three roles (admin, analyst = read-only, intern = unrelated tables only).
Fixture chain_store_fixture();

// Housing-style table: 10 columns, `rows` rows, deterministic for a seed.
Fixture housing_fixture(std::size_t rows, std::uint64_t seed);

std::string fixture_to_sql(const Fixture& fixture);

// Applies through the given (superuser) connection.
void apply_fixture(Connection& conn, const Fixture& fixture);

}  // namespace bs::harness
