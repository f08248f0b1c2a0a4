#include "mff/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "mff/errors.hpp"

namespace mff {

namespace {

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double population_std(const std::vector<double>& values) {
    const double mean = mean_of(values);
    double sq = 0.0;
    for (double v : values) {
        const double d = v - mean;
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(values.size()));
}

// Phi^m(r): mean over i of ln(C_i^m), C_i^m = (matches of vector i) / (N-m+1),
// with the Chebyshev self-match included so every C_i is positive.
double apen_phi(const std::vector<double>& v, std::size_t m, double r) {
    const std::size_t count = v.size() - m + 1;  // number of embedding vectors
    double sum_ln = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t matches = 0;
        for (std::size_t j = 0; j < count; ++j) {
            bool within = true;
            for (std::size_t k = 0; k < m; ++k) {
                if (std::abs(v[i + k] - v[j + k]) > r) {
                    within = false;
                    break;
                }
            }
            if (within) ++matches;
        }
        sum_ln += std::log(static_cast<double>(matches) / static_cast<double>(count));
    }
    return sum_ln / static_cast<double>(count);
}

}  // namespace

double feat_index(const TimeSlice&, std::size_t ordinal) {
    return static_cast<double>(ordinal);
}

double feat_mean(const TimeSlice& slice) {
    return mean_of(slice.values);
}

double feat_std(const TimeSlice& slice) {
    return population_std(slice.values);
}

double feat_distance(const TimeSlice& slice) {
    const auto [min_it, max_it] = std::minmax_element(slice.values.begin(), slice.values.end());
    return *max_it - *min_it;
}

double feat_apen(const TimeSlice& slice, std::size_t m_embed, double r) {
    if (m_embed == 0) throw Error("InvalidArgument", "ApEn embedding dimension must be positive");
    if (r < 0.0) throw Error("InvalidArgument", "ApEn tolerance r must be nonnegative");
    if (slice.size() < m_embed + 1) {
        throw Error("SliceTooShort", "ApEn(m=" + std::to_string(m_embed) + ") needs a slice of length >= " +
                                         std::to_string(m_embed + 1) + ", got " +
                                         std::to_string(slice.size()));
    }
    return apen_phi(slice.values, m_embed, r) - apen_phi(slice.values, m_embed + 1, r);
}

double feat_vg_degree(const TimeSlice& slice) {
    const std::size_t n = slice.size();
    if (n < 2) return 0.0;

    const std::vector<double>& v = slice.values;
    std::size_t edges = 0;
    // b is visible from a iff the slope of chord a-b strictly exceeds the slope
    // of every chord a-c with c between them; one left-to-right scan per anchor.
    for (std::size_t a = 0; a + 1 < n; ++a) {
        double max_slope = -std::numeric_limits<double>::infinity();
        for (std::size_t b = a + 1; b < n; ++b) {
            const double slope = (v[b] - v[a]) / static_cast<double>(b - a);
            if (b == a + 1 || slope > max_slope) ++edges;  // adjacent points always see each other
            max_slope = std::max(max_slope, slope);
        }
    }
    return 2.0 * static_cast<double>(edges);
}

FunctionSequence::FunctionSequence(std::vector<FeatureFunction> functions)
    : functions_(std::move(functions)) {
    if (functions_.empty()) {
        throw Error("EmptyFunctionSequence", "a function sequence needs at least one function");
    }
    std::set<std::string> seen;
    for (const FeatureFunction& f : functions_) {
        if (!seen.insert(f.name).second) {
            throw Error("DuplicateFunctionName", "duplicate feature function name: " + f.name);
        }
    }
}

FunctionSequence FunctionSequence::standard(const FeatureConfig& config) {
    std::vector<FeatureFunction> fs;
    fs.push_back({"index", [](const TimeSlice& s, std::size_t ordinal) { return feat_index(s, ordinal); }});
    fs.push_back({"mean", [](const TimeSlice& s, std::size_t) { return feat_mean(s); }});
    fs.push_back({"std", [](const TimeSlice& s, std::size_t) { return feat_std(s); }});
    fs.push_back({"distance", [](const TimeSlice& s, std::size_t) { return feat_distance(s); }});
    fs.push_back({"apen", [config](const TimeSlice& s, std::size_t) {
                      const double sd = feat_std(s);
                      if (sd == 0.0) return 0.0;  // constant slice: no tolerance scale
                      return feat_apen(s, config.apen_embedding, config.apen_r_factor * sd);
                  }});
    fs.push_back({"vg_degree", [](const TimeSlice& s, std::size_t) { return feat_vg_degree(s); }});
    return FunctionSequence(std::move(fs));
}

std::vector<std::string> FunctionSequence::names() const {
    std::vector<std::string> out;
    out.reserve(functions_.size());
    for (const FeatureFunction& f : functions_) out.push_back(f.name);
    return out;
}

FeatureMatrix build_feature_matrix(const TimeSliceSet& slice_set, const FunctionSequence& fs) {
    if (slice_set.slices.empty()) {
        throw Error("EmptySliceSet", "cannot featurize an empty slice set");
    }

    FeatureMatrix matrix;
    matrix.column_names = fs.names();
    matrix.rows.reserve(slice_set.size());
    for (const TimeSlice& slice : slice_set.slices) {
        std::vector<double> row;
        row.reserve(fs.size());
        for (const FeatureFunction& f : fs.functions()) {
            double value = 0.0;
            try {
                value = f.evaluate(slice, slice.start_ordinal);
            } catch (const Error& e) {
                throw Error(e.code(), "slice " + std::to_string(slice.start_ordinal) + ", feature '" +
                                          f.name + "': " + e.what());
            }
            if (!std::isfinite(value)) {
                throw Error("NonFiniteFeature", "slice " + std::to_string(slice.start_ordinal) +
                                                    ", feature '" + f.name +
                                                    "' produced a non-finite value");
            }
            row.push_back(value);
        }
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

double ColumnScaler::transform_value(double x, std::size_t column) const {
    const double centered = x - means[column];
    return stds[column] == 0.0 ? centered : centered / stds[column];
}

double ColumnScaler::inverse_value(double x, std::size_t column) const {
    return stds[column] == 0.0 ? x + means[column] : x * stds[column] + means[column];
}

std::vector<double> ColumnScaler::transform_row(const std::vector<double>& row) const {
    if (row.size() != column_count()) {
        throw Error("ShapeMismatch", "scaler has " + std::to_string(column_count()) +
                                         " columns, row has " + std::to_string(row.size()));
    }
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) out[c] = transform_value(row[c], c);
    return out;
}

std::pair<FeatureMatrix, ColumnScaler> fit_standardize(const FeatureMatrix& matrix,
                                                       RowRange train_rows) {
    if (train_rows.begin >= train_rows.end || train_rows.end > matrix.row_count()) {
        throw Error("EmptyTrainRange", "training row range [" + std::to_string(train_rows.begin) +
                                           ", " + std::to_string(train_rows.end) +
                                           ") is empty or out of bounds");
    }

    const std::size_t cols = matrix.column_count();
    const double count = static_cast<double>(train_rows.end - train_rows.begin);
    ColumnScaler scaler;
    scaler.means.assign(cols, 0.0);
    scaler.stds.assign(cols, 0.0);

    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = train_rows.begin; r < train_rows.end; ++r) sum += matrix.rows[r][c];
        const double mean = sum / count;
        double sq = 0.0;
        for (std::size_t r = train_rows.begin; r < train_rows.end; ++r) {
            const double d = matrix.rows[r][c] - mean;
            sq += d * d;
        }
        scaler.means[c] = mean;
        scaler.stds[c] = std::sqrt(sq / count);
    }

    FeatureMatrix scaled;
    scaled.column_names = matrix.column_names;
    scaled.rows.reserve(matrix.row_count());
    for (const std::vector<double>& row : matrix.rows) scaled.rows.push_back(scaler.transform_row(row));
    return {std::move(scaled), std::move(scaler)};
}

ColumnScaler fit_scalar_scaler(const std::vector<double>& values) {
    if (values.empty()) throw Error("EmptyTrainRange", "cannot fit a scaler on no values");
    ColumnScaler scaler;
    scaler.means = {mean_of(values)};
    scaler.stds = {population_std(values)};
    return scaler;
}

}  // namespace mff
