#pragma once

#include <chrono>

#include "bridgescope/registry.hpp"

namespace bs::harness {

// Domain-specific tools the scenarios use as proxy consumers/producers:
//   trend_analyze(sales, refunds)            -> net trend summary
//   zscore_normalize(rows, fields)           -> rows with fields z-scored
//   train_linreg(rows, features, target)     -> fitted linear model + r2
//   summarize_model(model)                   -> constant-size text summary
// All are pure; `producer_delay` injects a sleep before each returns, used by
// the parallelism tests.
void register_analytics_tools(ToolRegistry& registry,
                              std::chrono::milliseconds producer_delay =
                                  std::chrono::milliseconds(0));

}  // namespace bs::harness
