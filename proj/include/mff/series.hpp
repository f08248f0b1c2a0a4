#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mff {

/**
 * @brief Univariate time series: ordered (timestamp, value) pairs.
 *
 * Timestamps are opaque labels ("1990-01", "42", ...); only the ordinal
 * position of a point ever enters a computation. Values must be finite.
 */
class TimeSeries {
public:
    TimeSeries(std::vector<std::string> timestamps, std::vector<double> values);

    /// Builds a series with ordinal labels "1".."n".
    static TimeSeries from_values(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }

private:
    std::vector<std::string> timestamps_;
    std::vector<double> values_;
};

/**
 * @brief One contiguous window of the source series.
 *
 * start_ordinal is 1-based: slice i covers source values v_i .. v_{i+Ws-1}.
 */
struct TimeSlice {
    std::size_t start_ordinal = 1;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/**
 * @brief All windows of a fixed size, in increasing start order (step 1).
 */
struct TimeSliceSet {
    std::size_t window_size = 0;
    std::vector<TimeSlice> slices;

    std::size_t size() const noexcept { return slices.size(); }
};

/// A slice paired with the value immediately following it.
struct SupervisedExample {
    TimeSlice slice;
    double target = 0.0;
};

/**
 * @brief Supervised view of a slice set: every slice except the last gets the
 * next series value as its target; the last slice is kept for prediction.
 */
struct SupervisedSet {
    std::vector<SupervisedExample> examples;
    TimeSlice prediction_slice;

    std::size_t size() const noexcept { return examples.size(); }
};

/// Chronological train/test partition of a SupervisedSet (no shuffling).
struct SupervisedSplit {
    std::vector<SupervisedExample> train;
    std::vector<SupervisedExample> test;
};

/**
 * Loads a univariate series from a CSV file with a header row.
 *
 * @param path CSV file path
 * @param value_column header name of the value column
 * @param timestamp_column optional header name of the label column; when
 *        absent, rows are labelled by their 1-based ordinal
 *
 * Unparseable or non-finite values are a hard error (NonNumericValue with the
 * 1-based data row), never skipped.
 */
TimeSeries load_series(const std::string& path, const std::string& value_column,
                       const std::optional<std::string>& timestamp_column = std::nullopt);

/**
 * Slides a window of size ws over the series, producing n - ws + 1 slices.
 */
TimeSliceSet sliding_window(const TimeSeries& series, std::size_t ws);

/**
 * Pairs every slice except the last with the value immediately following it.
 * The slice set must have been produced from the same series.
 */
SupervisedSet make_supervised(const TimeSliceSet& slice_set, const TimeSeries& series);

/**
 * Chronological split: the first ceil(count * train_fraction) examples are
 * train, the rest test. Targets are future values, so there is no shuffling.
 */
SupervisedSplit train_test_split(const SupervisedSet& sup, double train_fraction);

/// Number of training examples the split assigns: ceil(count * train_fraction).
std::size_t split_train_count(std::size_t example_count, double train_fraction);

}  // namespace mff
