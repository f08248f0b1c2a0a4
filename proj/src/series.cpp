#include "mff/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mff/errors.hpp"

namespace mff {

namespace {

// Splits one CSV line on commas. No quoting support; trims surrounding
// whitespace and a trailing CR from each cell.
std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        auto first = cell.find_first_not_of(" \t\r");
        auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? std::string{}
                                                   : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + text.size() && std::isfinite(out);
}

}  // namespace

TimeSeries::TimeSeries(std::vector<std::string> timestamps, std::vector<double> values)
    : timestamps_(std::move(timestamps)), values_(std::move(values)) {
    if (values_.empty()) throw Error("EmptySeries", "time series must contain at least one value");
    if (timestamps_.size() != values_.size()) {
        throw Error("LengthMismatch", "timestamp count (" + std::to_string(timestamps_.size()) +
                                          ") does not match value count (" +
                                          std::to_string(values_.size()) + ")");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error("NonNumericValue",
                        "value at position " + std::to_string(i + 1) + " is not finite");
        }
    }
}

TimeSeries TimeSeries::from_values(std::vector<double> values) {
    std::vector<std::string> labels;
    labels.reserve(values.size());
    for (std::size_t i = 1; i <= values.size(); ++i) labels.push_back(std::to_string(i));
    return TimeSeries(std::move(labels), std::move(values));
}

TimeSeries load_series(const std::string& path, const std::string& value_column,
                       const std::optional<std::string>& timestamp_column) {
    std::ifstream file(path);
    if (!file) throw Error("MissingFile", "cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(file, line)) throw Error("EmptySeries", "CSV file has no header row: " + path);
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM

    const std::vector<std::string> header = split_csv_row(line);
    auto column_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw Error("MissingColumn", "column '" + name + "' not found in CSV header of " + path);
        }
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t value_idx = column_index(value_column);
    std::optional<std::size_t> ts_idx;
    if (timestamp_column) ts_idx = column_index(*timestamp_column);

    std::vector<std::string> timestamps;
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(file, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const std::vector<std::string> cells = split_csv_row(line);
        if (value_idx >= cells.size()) {
            throw Error("NonNumericValue",
                        "row " + std::to_string(row) + " has no cell for column '" + value_column + "'");
        }
        double value = 0.0;
        if (!parse_double(cells[value_idx], value)) {
            throw Error("NonNumericValue", "row " + std::to_string(row) + ": cannot parse '" +
                                               cells[value_idx] + "' as a finite number");
        }
        values.push_back(value);
        if (ts_idx && *ts_idx < cells.size()) {
            timestamps.push_back(cells[*ts_idx]);
        } else {
            timestamps.push_back(std::to_string(row));
        }
    }

    if (values.empty()) throw Error("EmptySeries", "CSV file contains no data rows: " + path);
    return TimeSeries(std::move(timestamps), std::move(values));
}

TimeSliceSet sliding_window(const TimeSeries& series, std::size_t ws) {
    const std::size_t n = series.size();
    if (ws == 0) throw Error("WindowNonPositive", "window size must be at least 1");
    if (ws > n) {
        throw Error("WindowTooLarge", "window size " + std::to_string(ws) +
                                          " exceeds series length " + std::to_string(n));
    }

    TimeSliceSet set;
    set.window_size = ws;
    set.slices.reserve(n - ws + 1);
    const std::vector<double>& v = series.values();
    for (std::size_t i = 0; i + ws <= n; ++i) {
        set.slices.push_back(
            TimeSlice{i + 1, std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(i),
                                                 v.begin() + static_cast<std::ptrdiff_t>(i + ws))});
    }
    return set;
}

SupervisedSet make_supervised(const TimeSliceSet& slice_set, const TimeSeries& series) {
    const std::size_t n = series.size();
    const std::size_t ws = slice_set.window_size;
    if (slice_set.slices.empty() || ws == 0 || slice_set.size() != n - ws + 1) {
        throw Error("Mismatch", "slice set was not produced from this series");
    }
    const std::vector<double>& v = series.values();
    for (const TimeSlice& slice : slice_set.slices) {
        const std::size_t start = slice.start_ordinal - 1;
        if (slice.size() != ws ||
            !std::equal(slice.values.begin(), slice.values.end(), v.begin() + static_cast<std::ptrdiff_t>(start))) {
            throw Error("Mismatch", "slice " + std::to_string(slice.start_ordinal) +
                                        " does not match the series at its position");
        }
    }
    if (slice_set.size() < 2) {
        throw Error("InsufficientExamples",
                    "a single slice leaves no target; need window size < series length");
    }

    SupervisedSet sup;
    sup.examples.reserve(slice_set.size() - 1);
    for (std::size_t i = 0; i + 1 < slice_set.size(); ++i) {
        // Target of slice i is v_{i+Ws} (1-based), the value right after the window.
        sup.examples.push_back(SupervisedExample{slice_set.slices[i], v[i + ws]});
    }
    sup.prediction_slice = slice_set.slices.back();
    return sup;
}

std::size_t split_train_count(std::size_t example_count, double train_fraction) {
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(example_count) * train_fraction));
}

SupervisedSplit train_test_split(const SupervisedSet& sup, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("InvalidTrainFraction", "train fraction must lie strictly between 0 and 1");
    }
    if (sup.size() < 2) {
        throw Error("TooFewExamples", "need at least 2 supervised examples to split, have " +
                                          std::to_string(sup.size()));
    }
    const std::size_t train_count = split_train_count(sup.size(), train_fraction);

    SupervisedSplit split;
    split.train.assign(sup.examples.begin(), sup.examples.begin() + static_cast<std::ptrdiff_t>(train_count));
    split.test.assign(sup.examples.begin() + static_cast<std::ptrdiff_t>(train_count), sup.examples.end());
    return split;
}

}  // namespace mff
