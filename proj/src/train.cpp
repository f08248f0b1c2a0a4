#include "mff/train.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "mff/errors.hpp"
#include "mff/textio.hpp"

namespace mff {

namespace {

struct PreparedData {
    FeatureMatrix features;  // all slices, standardized if configured
    std::vector<double> train_targets;  // standardized if configured
    std::size_t example_count = 0;
    std::size_t train_count = 0;
    std::optional<ColumnScaler> feature_scaler;
    std::optional<ColumnScaler> target_scaler;
};

// Slice, featurize, split and scale everything train_mff needs.
PreparedData prepare(const TimeSeries& series, const TrainConfig& config) {
    const TimeSliceSet slices = sliding_window(series, config.window_size);
    FeatureMatrix matrix = build_feature_matrix(slices, FunctionSequence::standard(config.features));
    const SupervisedSet sup = make_supervised(slices, series);

    PreparedData data;
    data.example_count = sup.size();
    data.train_count = split_train_count(sup.size(), config.train_fraction);

    if (config.standardize_features) {
        auto [scaled, scaler] = fit_standardize(matrix, RowRange{0, data.train_count});
        data.features = std::move(scaled);
        data.feature_scaler = std::move(scaler);
    } else {
        data.features = std::move(matrix);
    }

    data.train_targets.reserve(data.train_count);
    for (std::size_t i = 0; i < data.train_count; ++i) {
        data.train_targets.push_back(sup.examples[i].target);
    }
    if (config.standardize_targets) {
        ColumnScaler scaler = fit_scalar_scaler(data.train_targets);
        for (double& t : data.train_targets) t = scaler.transform_value(t, 0);
        data.target_scaler = std::move(scaler);
    }
    return data;
}

void clip_gradient(std::vector<double>& flat, double max_norm) {
    if (max_norm <= 0.0) return;
    double sq = 0.0;
    for (double g : flat) sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm > max_norm) {
        const double factor = max_norm / norm;
        for (double& g : flat) g *= factor;
    }
}

}  // namespace

BatchMode batch_mode_from_name(const std::string& name) {
    if (name == "full-batch") return BatchMode::FullBatch;
    if (name == "per-sample") return BatchMode::PerSample;
    throw Error("UnknownBatchMode",
                "unknown batch mode '" + name + "' (expected full-batch or per-sample)");
}

std::string batch_mode_name(BatchMode mode) {
    return mode == BatchMode::FullBatch ? "full-batch" : "per-sample";
}

TrainConfig resolve_config(TrainConfig config, std::size_t series_length) {
    if (config.window_size == 0) {
        config.window_size = static_cast<std::size_t>(
            std::llround(static_cast<double>(series_length) / 2.0));
        if (config.window_size == 0) config.window_size = 1;
    }
    const std::size_t quarter = std::max<std::size_t>(1, config.epochs / 4);
    if (config.step_size_up == 0) config.step_size_up = quarter;
    if (config.step_size_down == 0) config.step_size_down = quarter;
    return config;
}

TrainedCheckpoint train_mff(const TimeSeries& series, const TrainConfig& raw_config) {
    const TrainConfig config = resolve_config(raw_config, series.size());
    const std::size_t n = series.size();
    const std::size_t ws = config.window_size;

    if (config.epochs == 0) throw Error("InvalidArgument", "epoch count must be at least 1");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw Error("InvalidTrainFraction", "train fraction must lie strictly between 0 and 1");
    }
    if (n < ws + 2) {
        throw Error("SeriesTooShort", "training needs a series of length >= window + 2 (" +
                                          std::to_string(ws + 2) + "), got " + std::to_string(n));
    }

    PreparedData data = prepare(series, config);
    const std::size_t train_n = data.train_count;
    const double inv_train_n = 1.0 / static_cast<double>(train_n);

    MlpModel model = MlpModel::random_init(data.features.column_count(), config.hidden1,
                                           config.hidden2, config.activation, config.seed);
    AdamState adam(model.parameter_count(), config.adam);
    const ClrSchedule schedule(config.base_lr, config.max_lr, config.step_size_up,
                               config.step_size_down);

    std::vector<EpochRecord> history;
    history.reserve(config.epochs);
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0;
    std::vector<double> best_params = model.flatten();

    ForwardCache cache;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const double lr = schedule.lr_at(epoch - 1);

        // Epoch loss is the full-batch training MSE at the epoch's starting
        // parameters, in both modes, so the selected snapshot reproduces it.
        double sq_sum = 0.0;
        Gradients batch_grads = model.zero_gradients();
        for (std::size_t i = 0; i < train_n; ++i) {
            const double pred = model.forward(data.features.rows[i], &cache);
            const double diff = pred - data.train_targets[i];
            sq_sum += diff * diff;
            if (config.batch_mode == BatchMode::FullBatch) {
                batch_grads.add(model.backward(cache, data.train_targets[i]));
            }
        }
        const double loss = sq_sum * inv_train_n;
        if (!std::isfinite(loss)) {
            throw Error("NonFiniteLoss",
                        "training loss became non-finite at epoch " + std::to_string(epoch));
        }

        history.push_back(EpochRecord{epoch, lr, loss});
        if (loss < best_loss) {
            best_loss = loss;
            best_epoch = epoch;
            best_params = model.flatten();
        }

        if (config.batch_mode == BatchMode::FullBatch) {
            batch_grads.scale(inv_train_n);
            std::vector<double> grad_flat = batch_grads.flatten();
            clip_gradient(grad_flat, config.grad_clip);
            std::vector<double> params = model.flatten();
            adam.step(params, grad_flat, lr);
            model.unflatten(params);
        } else {
            for (std::size_t i = 0; i < train_n; ++i) {
                model.forward(data.features.rows[i], &cache);
                std::vector<double> grad_flat = model.backward(cache, data.train_targets[i]).flatten();
                clip_gradient(grad_flat, config.grad_clip);
                std::vector<double> params = model.flatten();
                adam.step(params, grad_flat, lr);
                model.unflatten(params);
            }
        }
    }

    model.unflatten(best_params);
    return TrainedCheckpoint{config,
                             std::move(model),
                             best_epoch,
                             best_loss,
                             std::move(data.feature_scaler),
                             std::move(data.target_scaler),
                             std::move(history)};
}

namespace {

// Featurize one slice with the checkpoint's function sequence and scalers,
// run the model, and undo the target transform.
double predict_row(const TrainedCheckpoint& checkpoint, const TimeSlice& slice) {
    const TimeSliceSet single{slice.size(), {slice}};
    const FeatureMatrix matrix =
        build_feature_matrix(single, FunctionSequence::standard(checkpoint.config.features));

    std::vector<double> row = matrix.rows[0];
    if (checkpoint.config.standardize_features) {
        if (!checkpoint.feature_scaler) {
            throw Error("ScalerMissing", "checkpoint was trained with standardized features "
                                         "but carries no feature scaler");
        }
        row = checkpoint.feature_scaler->transform_row(row);
    }

    double prediction = checkpoint.model.forward(row);
    if (checkpoint.config.standardize_targets) {
        if (!checkpoint.target_scaler) {
            throw Error("ScalerMissing", "checkpoint was trained with standardized targets "
                                         "but carries no target scaler");
        }
        prediction = checkpoint.target_scaler->inverse_value(prediction, 0);
    }
    return prediction;
}

}  // namespace

double predict_next(const TrainedCheckpoint& checkpoint, const TimeSeries& series) {
    const std::size_t ws = checkpoint.config.window_size;
    const std::size_t n = series.size();
    if (n < ws) {
        throw Error("SeriesTooShort", "series length " + std::to_string(n) +
                                          " is shorter than the checkpoint window " +
                                          std::to_string(ws));
    }

    const std::vector<double>& v = series.values();
    TimeSlice last{n - ws + 1,
                   std::vector<double>(v.end() - static_cast<std::ptrdiff_t>(ws), v.end())};
    return predict_row(checkpoint, last);
}

std::vector<EvaluationPoint> evaluate_walk_forward(const TrainedCheckpoint& checkpoint,
                                                   const TimeSeries& series, RowRange test_range) {
    const std::size_t ws = checkpoint.config.window_size;
    const std::size_t n = series.size();
    if (n < ws + 1) {
        throw Error("SeriesTooShort",
                    "series has no supervised examples for window " + std::to_string(ws));
    }

    const std::size_t example_count = n - ws;
    const std::size_t train_count = split_train_count(example_count, checkpoint.config.train_fraction);
    if (test_range.begin >= test_range.end) {
        throw Error("RangeOutOfBounds", "test range is empty");
    }
    if (test_range.end > example_count) {
        throw Error("RangeOutOfBounds", "test range end " + std::to_string(test_range.end) +
                                            " exceeds example count " +
                                            std::to_string(example_count));
    }
    if (test_range.begin < train_count) {
        throw Error("RangeOutOfBounds", "test range begins at " + std::to_string(test_range.begin) +
                                            " inside the training range [0, " +
                                            std::to_string(train_count) + ")");
    }

    const TimeSliceSet slices = sliding_window(series, ws);
    std::vector<EvaluationPoint> points;
    points.reserve(test_range.end - test_range.begin);
    for (std::size_t i = test_range.begin; i < test_range.end; ++i) {
        EvaluationPoint point;
        point.example_index = i;
        point.target_position = i + ws + 1;
        point.predicted = predict_row(checkpoint, slices.slices[i]);
        point.actual = series.values()[i + ws];
        points.push_back(point);
    }
    return points;
}

std::string loss_history_csv(const std::vector<EpochRecord>& history) {
    std::ostringstream out;
    out << "epoch,lr,loss\n";
    for (const EpochRecord& record : history) {
        out << record.epoch << ',' << format_double(record.lr) << ',' << format_double(record.loss)
            << '\n';
    }
    return out.str();
}

}  // namespace mff
