#include "bridgescope/harness/analytics.hpp"

#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "bridgescope/errors.hpp"

namespace bs::harness {
namespace {

double numeric(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    throw ToolError(errc::malformed_args, "field \"" + field + "\" is not numeric");
}

std::vector<std::string> string_list(const json& v, const char* name) {
    if (!v.is_array())
        throw ToolError(errc::malformed_args, std::string(name) + " must be an array");
    std::vector<std::string> out;
    for (const auto& item : v) out.push_back(item.get<std::string>());
    return out;
}

const json& rows_arg(const json& args) {
    if (!args.contains("rows") || !args["rows"].is_array())
        throw ToolError(errc::malformed_args, "\"rows\" must be an array of records");
    return args["rows"];
}

// Ordinary least squares via normal equations; k is small (<= 10).
json fit_linreg(const json& rows, const std::vector<std::string>& features,
                const std::string& target) {
    const size_t k = features.size() + 1;  // + intercept
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    double y_sum = 0.0, y_sq = 0.0;
    const size_t n = rows.size();
    if (n == 0) throw ToolError(errc::malformed_args, "cannot fit a model on 0 rows");
    for (const auto& row : rows) {
        std::vector<double> x(k, 1.0);
        for (size_t j = 0; j < features.size(); ++j) {
            if (!row.contains(features[j]))
                throw ToolError(errc::malformed_args,
                                "row is missing feature \"" + features[j] + "\"");
            x[j + 1] = numeric(row[features[j]], features[j]);
        }
        if (!row.contains(target))
            throw ToolError(errc::malformed_args, "row is missing target \"" + target + "\"");
        double y = numeric(row[target], target);
        y_sum += y;
        y_sq += y * y;
        for (size_t a = 0; a < k; ++a) {
            xty[a] += x[a] * y;
            for (size_t b = 0; b < k; ++b) xtx[a][b] += x[a] * x[b];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> beta = xty;
    for (size_t col = 0; col < k; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < k; ++r)
            if (std::fabs(xtx[r][col]) > std::fabs(xtx[pivot][col])) pivot = r;
        std::swap(xtx[col], xtx[pivot]);
        std::swap(beta[col], beta[pivot]);
        if (std::fabs(xtx[col][col]) < 1e-12)
            throw ToolError(errc::malformed_args, "singular feature matrix");
        for (size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            double factor = xtx[r][col] / xtx[col][col];
            for (size_t c = col; c < k; ++c) xtx[r][c] -= factor * xtx[col][c];
            beta[r] -= factor * beta[col];
        }
    }
    for (size_t i = 0; i < k; ++i) beta[i] /= xtx[i][i];
    // r2 from residuals
    double ss_res = 0.0;
    for (const auto& row : rows) {
        double pred = beta[0];
        for (size_t j = 0; j < features.size(); ++j)
            pred += beta[j + 1] * numeric(row[features[j]], features[j]);
        double y = numeric(row[target], target);
        ss_res += (y - pred) * (y - pred);
    }
    double mean = y_sum / static_cast<double>(n);
    double ss_tot = y_sq - static_cast<double>(n) * mean * mean;
    double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    json weights = json::object();
    for (size_t j = 0; j < features.size(); ++j) weights[features[j]] = beta[j + 1];
    return json{{"model",
                 {{"weights", weights}, {"intercept", beta[0]}, {"target", target}}},
                {"r2", r2},
                {"n", n}};
}

}  // namespace

void register_analytics_tools(ToolRegistry& registry,
                              std::chrono::milliseconds producer_delay) {
    auto delay = [producer_delay] {
        if (producer_delay.count() > 0) std::this_thread::sleep_for(producer_delay);
    };

    registry.register_external_tool(
        {"trend_analyze", "Analyze sales trends from sales and refund records.",
         json{{"properties",
               {{"sales", {{"type", "array"}}}, {"refunds", {{"type", "array"}}}}},
              {"required", json::array({"sales", "refunds"})}},
         RiskClass::Read},
        [delay](Session&, const json& args) {
            delay();
            if (!args.contains("sales") || !args["sales"].is_array() ||
                !args.contains("refunds") || !args["refunds"].is_array())
                throw ToolError(errc::malformed_args,
                                "trend_analyze needs sales and refunds arrays");
            double sold = 0.0, refunded = 0.0;
            for (const auto& row : args["sales"])
                if (row.contains("amount")) sold += numeric(row["amount"], "amount");
            for (const auto& row : args["refunds"])
                if (row.contains("amount")) refunded += numeric(row["amount"], "amount");
            double net = sold - refunded;
            return json{{"trend", net > 0 ? "up" : (net < 0 ? "down" : "flat")},
                        {"net", net},
                        {"sales_count", args["sales"].size()},
                        {"refund_count", args["refunds"].size()}};
        });

    registry.register_external_tool(
        {"zscore_normalize", "Z-score the named numeric fields of each record.",
         json{{"properties",
               {{"rows", {{"type", "array"}}}, {"fields", {{"type", "array"}}}}},
              {"required", json::array({"rows", "fields"})}},
         RiskClass::Read},
        [delay](Session&, const json& args) {
            delay();
            const json& rows = rows_arg(args);
            auto fields = string_list(args.at("fields"), "fields");
            json out = rows;
            for (const std::string& f : fields) {
                double sum = 0.0, sq = 0.0;
                for (const auto& row : rows) sum += numeric(row.at(f), f);
                double mean = rows.empty() ? 0.0 : sum / rows.size();
                for (const auto& row : rows) {
                    double d = numeric(row.at(f), f) - mean;
                    sq += d * d;
                }
                double stddev = rows.size() > 1 ? std::sqrt(sq / (rows.size() - 1)) : 0.0;
                for (auto& row : out) {
                    double v = numeric(row.at(f), f);
                    row[f] = stddev > 0 ? (v - mean) / stddev : 0.0;
                }
            }
            return out;
        });

    registry.register_external_tool(
        {"train_linreg", "Fit an ordinary-least-squares linear model.",
         json{{"properties",
               {{"rows", {{"type", "array"}}},
                {"features", {{"type", "array"}}},
                {"target", {{"type", "string"}}}}},
              {"required", json::array({"rows", "features", "target"})}},
         RiskClass::Read},
        [delay](Session&, const json& args) {
            delay();
            return fit_linreg(rows_arg(args), string_list(args.at("features"), "features"),
                              args.at("target").get<std::string>());
        });

    registry.register_external_tool(
        {"summarize_model", "Render a fitted model as a short text summary.",
         json{{"properties", {{"model", {{"type", "object"}}}}},
              {"required", json::array({"model"})}},
         RiskClass::Read},
        [delay](Session&, const json& args) {
            delay();
            const json& model = args.at("model");
            if (!model.is_object() || !model.contains("model"))
                throw ToolError(errc::malformed_args, "expected a train_linreg result");
            const json& inner = model["model"];
            size_t n_features = inner.value("weights", json::object()).size();
            double r2 = model.value("r2", 0.0);
            std::ostringstream text;
            text.precision(4);
            text << std::fixed << "linear model on " << n_features
                 << " feature(s) predicting " << inner.value("target", "?")
                 << ", r2=" << r2;
            return json{{"summary", text.str()}, {"n_features", n_features}};
        });
}

}  // namespace bs::harness
