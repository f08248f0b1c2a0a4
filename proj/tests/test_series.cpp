#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "mff/errors.hpp"
#include "mff/series.hpp"

using namespace mff;

namespace {

// Writes content to a fresh file under the test scratch directory.
std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "mff_series_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

std::string error_code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("load_series parses a two-row CSV") {
    const auto path = write_temp("two_rows.csv", "t,v\n1,10\n2,20\n");
    const TimeSeries series = load_series(path.string(), "v");
    CHECK(series.size() == 2);
    CHECK(series.values() == std::vector<double>{10.0, 20.0});
    CHECK(series.timestamps() == std::vector<std::string>{"1", "2"});
}

TEST_CASE("load_series keeps the timestamp column when asked") {
    const auto path = write_temp("labels.csv", "month,cci\n1990-01,4673\n1990-02,4685\n");
    const TimeSeries series = load_series(path.string(), "cci", "month");
    CHECK(series.timestamps() == std::vector<std::string>{"1990-01", "1990-02"});
}

TEST_CASE("load_series handles a 295-row file") {
    std::ostringstream csv;
    csv << "t,v\n";
    for (int i = 1; i <= 295; ++i) csv << i << ',' << 4000 + i << '\n';
    const auto path = write_temp("long.csv", csv.str());
    CHECK(load_series(path.string(), "v").size() == 295);
}

TEST_CASE("load_series error cases") {
    CHECK(error_code_of([] { load_series("/nonexistent/nowhere.csv", "v"); }) == "MissingFile");

    const auto bad_value = write_temp("bad_value.csv", "t,v\n1,abc\n");
    CHECK(error_code_of([&] { load_series(bad_value.string(), "v"); }) == "NonNumericValue");

    const auto bad_row = write_temp("bad_row2.csv", "t,v\n1,10\n2,oops\n");
    try {
        load_series(bad_row.string(), "v");
        FAIL("expected NonNumericValue");
    } catch (const Error& e) {
        CHECK(e.code() == "NonNumericValue");
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    const auto missing_col = write_temp("missing_col.csv", "t,v\n1,10\n");
    CHECK(error_code_of([&] { load_series(missing_col.string(), "value"); }) == "MissingColumn");

    const auto header_only = write_temp("header_only.csv", "t,v\n");
    CHECK(error_code_of([&] { load_series(header_only.string(), "v"); }) == "EmptySeries");

    const auto non_finite = write_temp("nan.csv", "t,v\n1,nan\n");
    CHECK(error_code_of([&] { load_series(non_finite.string(), "v"); }) == "NonNumericValue");
}

TEST_CASE("sliding_window produces every contiguous window") {
    const TimeSeries series = TimeSeries::from_values({1, 2, 3, 4, 5});
    const TimeSliceSet set = sliding_window(series, 3);
    REQUIRE(set.size() == 3);
    CHECK(set.window_size == 3);
    CHECK(set.slices[0].values == std::vector<double>{1, 2, 3});
    CHECK(set.slices[1].values == std::vector<double>{2, 3, 4});
    CHECK(set.slices[2].values == std::vector<double>{3, 4, 5});
    CHECK(set.slices[0].start_ordinal == 1);
    CHECK(set.slices[2].start_ordinal == 3);
}

TEST_CASE("sliding_window: 295 values with window 180 give 116 slices") {
    std::vector<double> values(295);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
    const TimeSliceSet set = sliding_window(TimeSeries::from_values(values), 180);
    CHECK(set.size() == 116);
}

TEST_CASE("sliding_window degenerate and error cases") {
    const TimeSeries series = TimeSeries::from_values({7, 8, 9, 10});
    const TimeSliceSet whole = sliding_window(series, 4);
    REQUIRE(whole.size() == 1);
    CHECK(whole.slices[0].values == series.values());

    CHECK(error_code_of([&] { sliding_window(series, 0); }) == "WindowNonPositive");
    CHECK(error_code_of([&] { sliding_window(series, 5); }) == "WindowTooLarge");
}

TEST_CASE("make_supervised pairs each slice with the next value") {
    const TimeSeries series = TimeSeries::from_values({1, 2, 3, 4});
    const SupervisedSet sup = make_supervised(sliding_window(series, 2), series);
    REQUIRE(sup.size() == 2);
    CHECK(sup.examples[0].slice.values == std::vector<double>{1, 2});
    CHECK(sup.examples[0].target == 3);
    CHECK(sup.examples[1].slice.values == std::vector<double>{2, 3});
    CHECK(sup.examples[1].target == 4);
    CHECK(sup.prediction_slice.values == std::vector<double>{3, 4});
}

TEST_CASE("make_supervised: 116 slices give 115 examples plus a prediction slice") {
    std::vector<double> values(295);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::sin(0.1 * static_cast<double>(i));
    const TimeSeries series = TimeSeries::from_values(values);
    const SupervisedSet sup = make_supervised(sliding_window(series, 180), series);
    CHECK(sup.size() == 115);
    CHECK(sup.prediction_slice.start_ordinal == 116);
}

TEST_CASE("make_supervised error cases") {
    const TimeSeries series = TimeSeries::from_values({1, 2, 3});
    CHECK(error_code_of([&] { make_supervised(sliding_window(series, 3), series); }) ==
          "InsufficientExamples");

    TimeSliceSet tampered = sliding_window(series, 2);
    tampered.slices[1].values[0] = 99;
    CHECK(error_code_of([&] { make_supervised(tampered, series); }) == "Mismatch");
}

TEST_CASE("train_test_split is chronological with a ceiling train count") {
    std::vector<double> values(12);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
    const TimeSeries series = TimeSeries::from_values(values);
    const SupervisedSet sup = make_supervised(sliding_window(series, 2), series);
    REQUIRE(sup.size() == 10);

    const SupervisedSplit split = train_test_split(sup, 0.8);
    CHECK(split.train.size() == 8);
    CHECK(split.test.size() == 2);
    CHECK(split.train.front().slice.start_ordinal == 1);
    CHECK(split.test.front().slice.start_ordinal == 9);
}

TEST_CASE("train_test_split: 115 examples at 0.8 give 92/23") {
    CHECK(split_train_count(115, 0.8) == 92);
    CHECK(115 - split_train_count(115, 0.8) == 23);
}

TEST_CASE("train_test_split rejects tiny sets") {
    const TimeSeries series = TimeSeries::from_values({1, 2, 3});
    const SupervisedSet sup = make_supervised(sliding_window(series, 2), series);
    REQUIRE(sup.size() == 1);
    CHECK_THROWS_AS(train_test_split(sup, 0.8), Error);
}

TEST_CASE("property: slice count and reassembly over random sizes") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng() % 200;
        const std::size_t ws = 1 + rng() % n;
        std::vector<double> values(n);
        std::uniform_real_distribution<double> dist(-100.0, 100.0);
        for (double& v : values) v = dist(rng);

        const TimeSeries series = TimeSeries::from_values(values);
        const TimeSliceSet set = sliding_window(series, ws);
        REQUIRE(set.size() == n - ws + 1);

        // First element of each slice plus the whole final slice rebuilds the series.
        std::vector<double> rebuilt;
        for (std::size_t i = 0; i + 1 < set.size(); ++i) rebuilt.push_back(set.slices[i].values[0]);
        rebuilt.insert(rebuilt.end(), set.slices.back().values.begin(),
                       set.slices.back().values.end());
        REQUIRE(rebuilt == values);
    }
}

TEST_CASE("property: split preserves order and partitions the examples") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + rng() % 120;
        const std::size_t ws = 1 + rng() % (n - 2);
        std::vector<double> values(n);
        std::uniform_real_distribution<double> dist(0.0, 10.0);
        for (double& v : values) v = dist(rng);

        const TimeSeries series = TimeSeries::from_values(values);
        const SupervisedSet sup = make_supervised(sliding_window(series, ws), series);
        if (sup.size() < 2) continue;
        const double fraction = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        const SupervisedSplit split = train_test_split(sup, fraction);

        REQUIRE(split.train.size() + split.test.size() == sup.size());
        REQUIRE(split.train.size() == split_train_count(sup.size(), fraction));
        for (std::size_t i = 0; i < sup.size(); ++i) {
            const SupervisedExample& expected = sup.examples[i];
            const SupervisedExample& got = i < split.train.size()
                                               ? split.train[i]
                                               : split.test[i - split.train.size()];
            REQUIRE(got.slice.start_ordinal == expected.slice.start_ordinal);
            REQUIRE(got.target == expected.target);
        }
    }
}

TEST_CASE("TimeSeries rejects malformed input") {
    CHECK_THROWS_AS(TimeSeries({}, {}), Error);
    CHECK_THROWS_AS(TimeSeries({"1"}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(TimeSeries({"1"}, {std::nan("")}), Error);
}
