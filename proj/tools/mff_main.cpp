// mff: train, run, and benchmark multi-feature-fusion forecasts from the
// command line. See README.md for the full workflow.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mff/checkpoint.hpp"
#include "mff/errors.hpp"
#include "mff/metrics.hpp"
#include "mff/textio.hpp"
#include "mff/train.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct InputArgs {
    std::string path;
    std::string value_column = "value";
    std::string timestamp_column;  // empty = label rows by ordinal

    mff::TimeSeries load() const {
        std::optional<std::string> ts;
        if (!timestamp_column.empty()) ts = timestamp_column;
        return mff::load_series(path, value_column, ts);
    }
};

void add_input_options(CLI::App& cmd, InputArgs& input, bool require_path = true) {
    auto* opt = cmd.add_option("-i,--input", input.path, "Input CSV file with a header row");
    if (require_path) opt->required();
    cmd.add_option("--value-column", input.value_column, "Name of the value column")
        ->capture_default_str();
    cmd.add_option("--timestamp-column", input.timestamp_column,
                   "Name of the label column (default: row ordinal)");
}

struct TrainFlags {
    std::size_t window = 0;
    std::vector<std::size_t> hidden{8, 5};
    std::size_t epochs = 10000;
    double base_lr = 1e-12;
    double max_lr = 1e-4;
    std::size_t step_up = 0;
    std::size_t step_down = 0;
    double split = 0.8;
    std::uint64_t seed = 0;
    std::string activation = "tanh";
    std::string batch_mode = "full-batch";
    std::size_t apen_m = 2;
    double apen_r_factor = 0.2;
    bool no_standardize_features = false;
    bool no_standardize_targets = false;
    double grad_clip = 0.0;
};

void add_train_options(CLI::App& cmd, TrainFlags& flags) {
    cmd.add_option("-w,--window", flags.window, "Sliding window size (default: half the series)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--hidden", flags.hidden, "Hidden layer sizes n1,n2")
        ->delimiter(',')
        ->expected(1, 2)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("-N,--epochs", flags.epochs, "Training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--base-lr", flags.base_lr, "CLR lower learning-rate bound")
        ->capture_default_str();
    cmd.add_option("--max-lr", flags.max_lr, "CLR upper learning-rate bound")
        ->capture_default_str();
    cmd.add_option("--step-up", flags.step_up, "CLR increasing half-cycle length (default: epochs/4)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--step-down", flags.step_down,
                   "CLR decreasing half-cycle length (default: epochs/4)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--split", flags.split, "Chronological train fraction")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    cmd.add_option("--seed", flags.seed, "Random seed for weight initialization")
        ->capture_default_str();
    cmd.add_option("--activation", flags.activation, "Hidden activation")
        ->check(CLI::IsMember({"tanh", "relu"}))
        ->capture_default_str();
    cmd.add_option("--batch-mode", flags.batch_mode, "Update granularity per epoch")
        ->check(CLI::IsMember({"full-batch", "per-sample"}))
        ->capture_default_str();
    cmd.add_option("--apen-m", flags.apen_m, "ApEn embedding dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--apen-r-factor", flags.apen_r_factor,
                   "ApEn tolerance as a multiple of the slice std")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_flag("--no-standardize-features", flags.no_standardize_features,
                 "Feed raw feature values to the network");
    cmd.add_flag("--no-standardize-targets", flags.no_standardize_targets,
                 "Train against raw target values");
    cmd.add_option("--grad-clip", flags.grad_clip, "Global L2 gradient cap (0 = off)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

mff::TrainConfig to_config(const TrainFlags& flags) {
    mff::TrainConfig config;
    config.window_size = flags.window;
    config.features.apen_embedding = flags.apen_m;
    config.features.apen_r_factor = flags.apen_r_factor;
    config.standardize_features = !flags.no_standardize_features;
    config.standardize_targets = !flags.no_standardize_targets;
    config.hidden1 = flags.hidden.at(0);
    config.hidden2 = flags.hidden.size() > 1 ? flags.hidden.at(1) : flags.hidden.at(0);
    config.activation = mff::activation_from_name(flags.activation);
    config.epochs = flags.epochs;
    config.base_lr = flags.base_lr;
    config.max_lr = flags.max_lr;
    config.step_size_up = flags.step_up;
    config.step_size_down = flags.step_down;
    config.grad_clip = flags.grad_clip;
    config.train_fraction = flags.split;
    config.seed = flags.seed;
    config.batch_mode = mff::batch_mode_from_name(flags.batch_mode);
    return config;
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path);
    if (!file) throw mff::Error("WriteFailed", "cannot open for writing: " + path);
    file << content;
    if (!file) throw mff::Error("WriteFailed", "failed writing " + path);
}

nlohmann::json make_manifest(const std::string& command, const InputArgs& input,
                             std::size_t series_length, const mff::TrainConfig& resolved,
                             const nlohmann::json& outputs) {
    return nlohmann::json{
        {"format", "mff-manifest"},
        {"version", 1},
        {"tool_version", kToolVersion},
        {"command", command},
        {"created_at", iso8601_now()},
        {"input",
         {{"path", input.path},
          {"value_column", input.value_column},
          {"timestamp_column",
           input.timestamp_column.empty() ? nlohmann::json() : nlohmann::json(input.timestamp_column)},
          {"rows", series_length},
          {"fnv1a64", mff::fnv1a_file_hex(input.path)}}},
        {"config", mff::config_to_json(resolved)},
        {"outputs", outputs},
    };
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainCommand {
    InputArgs input;
    TrainFlags flags;
    std::string from_manifest;
    std::string checkpoint_path = "checkpoint.json";
    std::string losses_path = "losses.csv";
    std::string manifest_path = "manifest.json";

    int run() {
        mff::TrainConfig config;
        if (!from_manifest.empty()) {
            std::ifstream file(from_manifest);
            if (!file) throw mff::Error("MissingFile", "cannot open manifest: " + from_manifest);
            nlohmann::json manifest;
            file >> manifest;
            config = mff::config_from_json(manifest.at("config"));
            input.path = manifest.at("input").at("path").get<std::string>();
            input.value_column = manifest.at("input").at("value_column").get<std::string>();
            const auto& ts = manifest.at("input").at("timestamp_column");
            input.timestamp_column = ts.is_null() ? "" : ts.get<std::string>();
        } else {
            config = to_config(flags);
        }

        const mff::TimeSeries series = input.load();
        const mff::TrainConfig resolved = mff::resolve_config(config, series.size());
        const mff::TrainedCheckpoint checkpoint = mff::train_mff(series, resolved);

        mff::save_checkpoint(checkpoint, checkpoint_path);
        write_text_file(losses_path, mff::loss_history_csv(checkpoint.history));
        const nlohmann::json manifest = make_manifest(
            "train", input, series.size(), checkpoint.config,
            nlohmann::json{{"checkpoint", checkpoint_path}, {"losses", losses_path}});
        write_text_file(manifest_path, manifest.dump(2) + "\n");

        std::cout << "trained " << resolved.epochs << " epochs; best epoch "
                  << checkpoint.best_epoch << " with loss "
                  << mff::format_double(checkpoint.best_loss) << "\n"
                  << "checkpoint: " << checkpoint_path << "\nlosses: " << losses_path
                  << "\nmanifest: " << manifest_path << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictCommand {
    InputArgs input;
    std::string checkpoint_path;
    std::string format = "text";

    int run() {
        const mff::TrainedCheckpoint checkpoint = mff::load_checkpoint(checkpoint_path);
        const mff::TimeSeries series = input.load();
        const double prediction = mff::predict_next(checkpoint, series);

        if (format == "json") {
            const mff::TimeSliceSet slices =
                mff::sliding_window(series, checkpoint.config.window_size);
            const mff::FeatureMatrix features = mff::build_feature_matrix(
                mff::TimeSliceSet{checkpoint.config.window_size, {slices.slices.back()}},
                mff::FunctionSequence::standard(checkpoint.config.features));
            nlohmann::json out{{"prediction", prediction},
                               {"features", features.rows[0]},
                               {"ordinal", slices.slices.back().start_ordinal}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << mff::format_double(prediction) << "\n";
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

std::string predictions_csv(const mff::TimeSeries& series,
                            const std::vector<mff::EvaluationPoint>& points) {
    std::string csv = "t,y,y_hat\n";
    for (const mff::EvaluationPoint& point : points) {
        csv += series.timestamps()[point.target_position - 1];
        csv += ',';
        csv += mff::format_double(point.actual);
        csv += ',';
        csv += mff::format_double(point.predicted);
        csv += '\n';
    }
    return csv;
}

struct EvaluateCommand {
    InputArgs input;
    std::string checkpoint_path;
    std::string predictions_path = "predictions.csv";

    int run() {
        const mff::TrainedCheckpoint checkpoint = mff::load_checkpoint(checkpoint_path);
        const mff::TimeSeries series = input.load();

        const std::size_t ws = checkpoint.config.window_size;
        if (series.size() < ws + 2) {
            throw mff::Error("SeriesTooShort",
                             "series is too short for the checkpoint window " + std::to_string(ws));
        }
        const std::size_t example_count = series.size() - ws;
        const std::size_t train_count =
            mff::split_train_count(example_count, checkpoint.config.train_fraction);
        if (train_count >= example_count) {
            throw mff::Error("RangeOutOfBounds", "the split leaves no test examples");
        }

        const auto points = mff::evaluate_walk_forward(checkpoint, series,
                                                       mff::RowRange{train_count, example_count});
        std::vector<double> predicted, actual;
        for (const mff::EvaluationPoint& point : points) {
            predicted.push_back(point.predicted);
            actual.push_back(point.actual);
        }

        write_text_file(predictions_path, predictions_csv(series, points));
        std::cout << mff::format_scores_text({{"mff", mff::error_report(predicted, actual)}})
                  << "predictions: " << predictions_path << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchCommand {
    InputArgs input;
    TrainFlags flags;
    std::vector<std::string> methods{"mff", "naive", "sma", "ols"};
    std::size_t sma_k = 1;
    std::string table_path = "bench.csv";

    int run() {
        const mff::TimeSeries series = input.load();
        const mff::TrainConfig resolved = mff::resolve_config(to_config(flags), series.size());

        const std::size_t ws = resolved.window_size;
        if (series.size() < ws + 2) {
            throw mff::Error("SeriesTooShort",
                             "series is too short for window " + std::to_string(ws));
        }
        const std::size_t example_count = series.size() - ws;
        const std::size_t train_count =
            mff::split_train_count(example_count, resolved.train_fraction);
        if (train_count >= example_count) {
            throw mff::Error("RangeOutOfBounds", "the split leaves no test examples");
        }

        // Each test target sits at series position j + ws (0-based); every
        // baseline sees only the values strictly before it.
        std::vector<double> actual;
        for (std::size_t j = train_count; j < example_count; ++j) {
            actual.push_back(series.values()[j + ws]);
        }

        std::vector<mff::MethodScores> rows;
        for (const std::string& method : methods) {
            std::vector<double> predicted;
            if (method == "mff") {
                const mff::TrainedCheckpoint checkpoint = mff::train_mff(series, resolved);
                for (const auto& point : mff::evaluate_walk_forward(
                         checkpoint, series, mff::RowRange{train_count, example_count})) {
                    predicted.push_back(point.predicted);
                }
            } else {
                for (std::size_t j = train_count; j < example_count; ++j) {
                    const std::span<const double> history(series.values().data(), j + ws);
                    if (method == "naive") predicted.push_back(mff::naive_forecast(history));
                    else if (method == "sma") predicted.push_back(mff::sma_forecast(history, sma_k));
                    else predicted.push_back(mff::ols_trend_forecast(history));
                }
            }
            rows.push_back({method == "sma" ? "sma(k=" + std::to_string(sma_k) + ")" : method,
                            mff::error_report(predicted, actual)});
        }

        write_text_file(table_path, mff::format_scores_csv(rows));
        std::cout << mff::format_scores_text(rows) << "table: " << table_path << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

struct FeaturesCommand {
    InputArgs input;
    std::size_t window = 0;
    double split = 0.8;
    std::size_t apen_m = 2;
    double apen_r_factor = 0.2;
    std::string output_path = "features.csv";
    std::string scaler_path = "scaler.json";

    int run() {
        const mff::TimeSeries series = input.load();
        std::size_t ws = window;
        if (ws == 0) {
            mff::TrainConfig defaults;
            ws = mff::resolve_config(defaults, series.size()).window_size;
        }

        const mff::FeatureConfig feature_config{apen_m, apen_r_factor};
        const mff::FunctionSequence fs = mff::FunctionSequence::standard(feature_config);
        const mff::FeatureMatrix matrix =
            mff::build_feature_matrix(mff::sliding_window(series, ws), fs);

        std::string csv;
        for (std::size_t c = 0; c < matrix.column_names.size(); ++c) {
            csv += (c ? "," : "") + matrix.column_names[c];
        }
        csv += '\n';
        for (const auto& row : matrix.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                csv += (c ? "," : "") + mff::format_double(row[c]);
            }
            csv += '\n';
        }
        write_text_file(output_path, csv);

        // Scaler fitted on the training portion of the supervised rows, the
        // same range training itself would use.
        std::size_t train_count = mff::split_train_count(series.size() - ws, split);
        if (train_count == 0) train_count = matrix.row_count();
        const auto [scaled, scaler] = mff::fit_standardize(matrix, mff::RowRange{0, train_count});
        (void)scaled;
        nlohmann::json sidecar{{"columns", matrix.column_names},
                               {"means", scaler.means},
                               {"stds", scaler.stds},
                               {"fitted_rows", train_count}};
        write_text_file(scaler_path, sidecar.dump(2) + "\n");

        std::cout << "features: " << output_path << " (" << matrix.row_count() << " x "
                  << matrix.column_count() << ")\nscaler: " << scaler_path << "\n";
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-feature fusion time-series forecasting"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.set_config("--config", "", "Key=value config file (flags take precedence)");

    TrainCommand train;
    CLI::App* train_cmd = app.add_subcommand(
        "train", "Train a model; writes checkpoint JSON, loss-history CSV, and a run manifest");
    add_input_options(*train_cmd, train.input, false);
    add_train_options(*train_cmd, train.flags);
    train_cmd->add_option("--from-manifest", train.from_manifest,
                          "Replay a previous run from its manifest file");
    train_cmd->add_option("--checkpoint", train.checkpoint_path, "Checkpoint output path")
        ->capture_default_str();
    train_cmd->add_option("--losses", train.losses_path, "Loss-history CSV output path")
        ->capture_default_str();
    train_cmd->add_option("--manifest", train.manifest_path, "Run-manifest output path")
        ->capture_default_str();
    train_cmd->callback([&train, train_cmd] {
        if (train.from_manifest.empty() && train.input.path.empty()) {
            throw CLI::RequiredError(train_cmd->get_option("--input")->get_name());
        }
    });

    PredictCommand predict;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Predict the value following the input series");
    add_input_options(*predict_cmd, predict.input);
    predict_cmd->add_option("-c,--checkpoint", predict.checkpoint_path, "Trained checkpoint JSON")
        ->required();
    predict_cmd->add_option("--format", predict.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    EvaluateCommand evaluate;
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "Score a checkpoint on its held-out test range and dump (t, y, y_hat)");
    add_input_options(*evaluate_cmd, evaluate.input);
    evaluate_cmd->add_option("-c,--checkpoint", evaluate.checkpoint_path, "Trained checkpoint JSON")
        ->required();
    evaluate_cmd->add_option("--predictions", evaluate.predictions_path,
                             "Per-point predictions CSV output path")
        ->capture_default_str();

    BenchCommand bench;
    CLI::App* bench_cmd = app.add_subcommand(
        "bench", "Compare MFF against naive, moving-average, and linear-trend baselines");
    add_input_options(*bench_cmd, bench.input);
    add_train_options(*bench_cmd, bench.flags);
    bench_cmd->add_option("--methods", bench.methods, "Methods to include")
        ->delimiter(',')
        ->check(CLI::IsMember({"mff", "naive", "sma", "ols"}))
        ->capture_default_str();
    bench_cmd->add_option("--sma-k", bench.sma_k, "Moving-average window")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--table", bench.table_path, "Comparison table CSV output path")
        ->capture_default_str();

    FeaturesCommand features;
    CLI::App* features_cmd =
        app.add_subcommand("features", "Dump the feature matrix CSV and scaler sidecar JSON");
    add_input_options(*features_cmd, features.input);
    features_cmd->add_option("-w,--window", features.window,
                             "Sliding window size (default: half the series)")
        ->check(CLI::PositiveNumber);
    features_cmd->add_option("--split", features.split, "Train fraction used to fit the scaler")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    features_cmd->add_option("--apen-m", features.apen_m, "ApEn embedding dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    features_cmd->add_option("--apen-r-factor", features.apen_r_factor,
                             "ApEn tolerance as a multiple of the slice std")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    features_cmd->add_option("-o,--output", features.output_path, "Feature matrix CSV path")
        ->capture_default_str();
    features_cmd->add_option("--scaler", features.scaler_path, "Scaler sidecar JSON path")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const mff::Error& e) {
        std::cerr << nlohmann::json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }

    try {
        if (train_cmd->parsed()) return train.run();
        if (predict_cmd->parsed()) return predict.run();
        if (evaluate_cmd->parsed()) return evaluate.run();
        if (bench_cmd->parsed()) return bench.run();
        if (features_cmd->parsed()) return features.run();
    } catch (const mff::Error& e) {
        std::cerr << nlohmann::json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
