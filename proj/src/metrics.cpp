#include "mff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "mff/errors.hpp"
#include "mff/textio.hpp"

namespace mff {

ErrorReport error_report(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.empty()) throw Error("EmptyInput", "error report needs at least one pair");
    if (predicted.size() != actual.size()) {
        throw Error("LengthMismatch", "predicted count " + std::to_string(predicted.size()) +
                                          " does not match actual count " +
                                          std::to_string(actual.size()));
    }

    const std::size_t n = predicted.size();
    const double dn = static_cast<double>(n);

    double abs_sum = 0.0, sq_sum = 0.0, mape_sum = 0.0, smape_sum = 0.0;
    bool mape_defined = true, smape_defined = true;
    double y_min = actual[0], y_max = actual[0];

    for (std::size_t i = 0; i < n; ++i) {
        const double diff = predicted[i] - actual[i];
        const double abs_diff = std::abs(diff);
        abs_sum += abs_diff;
        sq_sum += diff * diff;
        if (actual[i] == 0.0) {
            mape_defined = false;
        } else {
            mape_sum += abs_diff / actual[i];
        }
        const double pair_sum = predicted[i] + actual[i];
        if (pair_sum == 0.0) {
            smape_defined = false;
        } else {
            smape_sum += abs_diff / pair_sum;
        }
        y_min = std::min(y_min, actual[i]);
        y_max = std::max(y_max, actual[i]);
    }

    ErrorReport report;
    report.count = n;
    report.mad = abs_sum / dn;
    report.rmse = std::sqrt(sq_sum / dn);
    if (mape_defined) report.mape = mape_sum / dn;
    if (smape_defined) report.smape = 2.0 * smape_sum / dn;
    if (y_max != y_min) report.nrmse = report.rmse / (y_max - y_min);
    return report;
}

double naive_forecast(std::span<const double> values) {
    if (values.empty()) throw Error("EmptyInput", "naive forecast needs at least one value");
    return values.back();
}

double sma_forecast(std::span<const double> values, std::size_t k) {
    if (k == 0) throw Error("InvalidArgument", "SMA window k must be positive");
    if (values.size() < k) {
        throw Error("TooFewValues", "SMA(" + std::to_string(k) + ") needs at least " +
                                        std::to_string(k) + " values, got " +
                                        std::to_string(values.size()));
    }
    double sum = 0.0;
    for (std::size_t i = values.size() - k; i < values.size(); ++i) sum += values[i];
    return sum / static_cast<double>(k);
}

double ols_trend_forecast(std::span<const double> values) {
    const std::size_t t = values.size();
    if (t < 2) throw Error("TooFewValues", "OLS trend needs at least 2 values");

    const double dn = static_cast<double>(t);
    double x_sum = 0.0, y_sum = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        x_sum += static_cast<double>(i + 1);
        y_sum += values[i];
    }
    const double x_mean = x_sum / dn;
    const double y_mean = y_sum / dn;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        const double dx = static_cast<double>(i + 1) - x_mean;
        sxx += dx * dx;
        sxy += dx * (values[i] - y_mean);
    }
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;
    return intercept + slope * static_cast<double>(t + 1);
}

namespace {

std::string cell(const std::optional<double>& value) {
    return value ? format_double(*value) : "undefined";
}

}  // namespace

std::string format_scores_text(const std::vector<MethodScores>& rows) {
    const std::vector<std::string> headers = {"method", "MAD", "MAPE", "SMAPE", "RMSE", "NRMSE"};
    std::vector<std::vector<std::string>> cells;
    cells.push_back(headers);
    for (const MethodScores& row : rows) {
        cells.push_back({row.method, format_double(row.report.mad), cell(row.report.mape),
                         cell(row.report.smape), format_double(row.report.rmse),
                         cell(row.report.nrmse)});
    }

    std::vector<std::size_t> widths(headers.size(), 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }

    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << row[c];
        }
        out << '\n';
    }
    return out.str();
}

std::string format_scores_csv(const std::vector<MethodScores>& rows) {
    std::ostringstream out;
    out << "method,mad,mape,smape,rmse,nrmse,count\n";
    for (const MethodScores& row : rows) {
        out << row.method << ',' << format_double(row.report.mad) << ',' << cell(row.report.mape)
            << ',' << cell(row.report.smape) << ',' << format_double(row.report.rmse) << ','
            << cell(row.report.nrmse) << ',' << row.report.count << '\n';
    }
    return out.str();
}

}  // namespace mff
