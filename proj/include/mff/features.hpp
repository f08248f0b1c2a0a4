#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mff/series.hpp"

namespace mff {

/// Parameters of the slice feature functions.
struct FeatureConfig {
    std::size_t apen_embedding = 2;  // embedding dimension m of ApEn
    double apen_r_factor = 0.2;      // tolerance r = factor * population std of the slice
};

/**
 * @brief One feature: maps a slice (and its 1-based ordinal) to a single real.
 */
struct FeatureFunction {
    std::string name;
    std::function<double(const TimeSlice&, std::size_t ordinal)> evaluate;
};

/**
 * @brief Ordered list of feature functions with unique names (length >= 1).
 */
class FunctionSequence {
public:
    explicit FunctionSequence(std::vector<FeatureFunction> functions);

    /// The six standard functions: index, mean, std, distance, apen, vg_degree.
    static FunctionSequence standard(const FeatureConfig& config = {});

    std::size_t size() const noexcept { return functions_.size(); }
    const std::vector<FeatureFunction>& functions() const noexcept { return functions_; }
    std::vector<std::string> names() const;

private:
    std::vector<FeatureFunction> functions_;
};

/**
 * @brief Per-slice feature vectors: one row per slice, one column per function.
 */
struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t column_count() const noexcept { return column_names.size(); }
};

/**
 * @brief Per-column standardization state, fitted on training rows only.
 *
 * A column with zero population std is mean-centered only (std stored as 0);
 * the transform stays invertible either way.
 */
struct ColumnScaler {
    std::vector<double> means;
    std::vector<double> stds;

    std::size_t column_count() const noexcept { return means.size(); }

    double transform_value(double x, std::size_t column) const;
    double inverse_value(double x, std::size_t column) const;
    std::vector<double> transform_row(const std::vector<double>& row) const;
};

/// Half-open row range [begin, end).
struct RowRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// The six standard feature functions. Each maps one slice to one real value.
double feat_index(const TimeSlice& slice, std::size_t ordinal);
double feat_mean(const TimeSlice& slice);
double feat_std(const TimeSlice& slice);  // population std (divide by Ws)
double feat_distance(const TimeSlice& slice);

/**
 * Approximate entropy ApEn(m, r) = Phi^m(r) - Phi^{m+1}(r) with Chebyshev
 * distance between embedding vectors and self-matches counted, so every
 * C_i >= 1/(N-m+1) and no log of zero occurs. Requires slice length >= m + 1.
 */
double feat_apen(const TimeSlice& slice, std::size_t m_embed, double r);

/**
 * Sum of node degrees (= 2|E|) of the natural visibility graph of the slice,
 * with points at integer abscissae 1..Ws and strict visibility inequality.
 */
double feat_vg_degree(const TimeSlice& slice);

/// Row i = [F_1(slice_i), ..., F_m(slice_i)] in function-sequence order.
FeatureMatrix build_feature_matrix(const TimeSliceSet& slice_set, const FunctionSequence& fs);

/**
 * Fits a ColumnScaler on the given training rows and returns the whole matrix
 * transformed with it. Test rows may fall outside [-1, 1]; no clipping.
 */
std::pair<FeatureMatrix, ColumnScaler> fit_standardize(const FeatureMatrix& matrix,
                                                       RowRange train_rows);

/// Fits a one-column scaler on a value vector (used for regression targets).
ColumnScaler fit_scalar_scaler(const std::vector<double>& values);

}  // namespace mff
