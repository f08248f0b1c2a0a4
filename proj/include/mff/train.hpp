#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mff/features.hpp"
#include "mff/net.hpp"
#include "mff/optim.hpp"
#include "mff/series.hpp"

namespace mff {

/// How parameter updates are applied within an epoch.
enum class BatchMode {
    FullBatch,  // one Adam step per epoch on the averaged gradient
    PerSample,  // one Adam step per training example, in order
};

BatchMode batch_mode_from_name(const std::string& name);
std::string batch_mode_name(BatchMode mode);

/**
 * @brief Everything a training run depends on. Zero-valued window_size and
 * CLR step sizes are resolved against the series (round(n/2) and epochs/4).
 */
struct TrainConfig {
    std::size_t window_size = 0;
    FeatureConfig features;
    bool standardize_features = true;
    bool standardize_targets = true;
    std::size_t hidden1 = 8;
    std::size_t hidden2 = 5;
    Activation activation = Activation::Tanh;
    std::size_t epochs = 10000;
    AdamConfig adam;
    double base_lr = 1e-12;
    double max_lr = 1e-4;
    std::size_t step_size_up = 0;
    std::size_t step_size_down = 0;
    double grad_clip = 0.0;  // global L2 cap on the batch gradient; 0 disables
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    BatchMode batch_mode = BatchMode::FullBatch;
};

/// Fills in the series-dependent defaults; validation happens at train time.
TrainConfig resolve_config(TrainConfig config, std::size_t series_length);

/// One row of the training log.
struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double lr = 0.0;
    double loss = 0.0;
};

/**
 * @brief The minimum-loss parameter snapshot selected over all epochs,
 * with the scalers and resolved config needed to reproduce predictions.
 *
 * best_loss == min over history; best_epoch is the earliest epoch attaining
 * it. The loss of epoch e is measured before that epoch's parameter update,
 * so re-evaluating the stored model reproduces best_loss exactly.
 */
struct TrainedCheckpoint {
    TrainConfig config;  // resolved echo
    MlpModel model;
    std::size_t best_epoch = 0;
    double best_loss = 0.0;
    std::optional<ColumnScaler> feature_scaler;
    std::optional<ColumnScaler> target_scaler;
    std::vector<EpochRecord> history;
};

/**
 * Runs the full pipeline: slice, featurize, split, then train for
 * config.epochs epochs with Adam and the triangular CLR schedule.
 * Deterministic given (series, config, seed).
 */
TrainedCheckpoint train_mff(const TimeSeries& series, const TrainConfig& config);

/**
 * One-step-ahead forecast: featurizes the final slice of the series, applies
 * the checkpoint scalers, runs the model, inverse-transforms the output.
 */
double predict_next(const TrainedCheckpoint& checkpoint, const TimeSeries& series);

/// One evaluated test point.
struct EvaluationPoint {
    std::size_t example_index = 0;   // 0-based index into the supervised examples
    std::size_t target_position = 0; // 1-based position of the target in the series
    double predicted = 0.0;
    double actual = 0.0;
};

/**
 * Predicts every supervised example in test_range (half-open, 0-based) from
 * its slice's features, without refitting. The range must lie entirely inside
 * the test portion implied by the checkpoint's train fraction.
 */
std::vector<EvaluationPoint> evaluate_walk_forward(const TrainedCheckpoint& checkpoint,
                                                   const TimeSeries& series, RowRange test_range);

/// CSV with header epoch,lr,loss at full round-trip precision.
std::string loss_history_csv(const std::vector<EpochRecord>& history);

}  // namespace mff
