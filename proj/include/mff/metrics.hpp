#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mff {

/**
 * @brief The five error measures over a set of (predicted, actual) pairs.
 *
 * MAPE, SMAPE and NRMSE can be undefined on degenerate inputs (an actual of
 * zero, a prediction+actual sum of zero, a constant actual range); those are
 * reported as empty optionals instead of failing the whole report.
 */
struct ErrorReport {
    double mad = 0.0;
    std::optional<double> mape;
    std::optional<double> smape;
    double rmse = 0.0;
    std::optional<double> nrmse;
    std::size_t count = 0;
};

/**
 * MAD  = mean |y^ - y|
 * MAPE = mean (|y^ - y| / y)            (fraction, no x100)
 * SMAPE = (2/N) sum |y^ - y| / (y^ + y)
 * RMSE = sqrt(mean (y^ - y)^2)
 * NRMSE = RMSE / (y_max - y_min)        (range of the actual values)
 */
ErrorReport error_report(std::span<const double> predicted, std::span<const double> actual);

/// Last observed value (the random-walk forecast; coincides with SMA(K=1)).
double naive_forecast(std::span<const double> values);

/// Mean of the last k values.
double sma_forecast(std::span<const double> values, std::size_t k);

/**
 * Fits y = a + b * index by least squares over all available values
 * (1-based indices) and extrapolates one step past the last observation.
 */
double ols_trend_forecast(std::span<const double> values);

/// One named row of a comparison table.
struct MethodScores {
    std::string method;
    ErrorReport report;
};

/// Aligned plain-text table, columns MAD, MAPE, SMAPE, RMSE, NRMSE.
std::string format_scores_text(const std::vector<MethodScores>& rows);

/// CSV with header method,mad,mape,smape,rmse,nrmse,count.
std::string format_scores_csv(const std::vector<MethodScores>& rows);

}  // namespace mff
