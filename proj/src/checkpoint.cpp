#include "mff/checkpoint.hpp"

#include <fstream>

#include "mff/errors.hpp"

namespace mff {

namespace {

constexpr int kCheckpointVersion = 1;

nlohmann::json scaler_to_json(const ColumnScaler& scaler) {
    return nlohmann::json{{"means", scaler.means}, {"stds", scaler.stds}};
}

ColumnScaler scaler_from_json(const nlohmann::json& j) {
    ColumnScaler scaler;
    scaler.means = j.at("means").get<std::vector<double>>();
    scaler.stds = j.at("stds").get<std::vector<double>>();
    if (scaler.means.size() != scaler.stds.size()) {
        throw Error("CorruptCheckpoint", "scaler means/stds lengths disagree");
    }
    return scaler;
}

}  // namespace

nlohmann::json config_to_json(const TrainConfig& config) {
    return nlohmann::json{
        {"window_size", config.window_size},
        {"apen_embedding", config.features.apen_embedding},
        {"apen_r_factor", config.features.apen_r_factor},
        {"standardize_features", config.standardize_features},
        {"standardize_targets", config.standardize_targets},
        {"hidden1", config.hidden1},
        {"hidden2", config.hidden2},
        {"activation", activation_name(config.activation)},
        {"epochs", config.epochs},
        {"beta1", config.adam.beta1},
        {"beta2", config.adam.beta2},
        {"epsilon", config.adam.epsilon},
        {"base_lr", config.base_lr},
        {"max_lr", config.max_lr},
        {"step_size_up", config.step_size_up},
        {"step_size_down", config.step_size_down},
        {"grad_clip", config.grad_clip},
        {"train_fraction", config.train_fraction},
        {"seed", config.seed},
        {"batch_mode", batch_mode_name(config.batch_mode)},
    };
}

TrainConfig config_from_json(const nlohmann::json& j) {
    TrainConfig config;
    config.window_size = j.at("window_size").get<std::size_t>();
    config.features.apen_embedding = j.at("apen_embedding").get<std::size_t>();
    config.features.apen_r_factor = j.at("apen_r_factor").get<double>();
    config.standardize_features = j.at("standardize_features").get<bool>();
    config.standardize_targets = j.at("standardize_targets").get<bool>();
    config.hidden1 = j.at("hidden1").get<std::size_t>();
    config.hidden2 = j.at("hidden2").get<std::size_t>();
    config.activation = activation_from_name(j.at("activation").get<std::string>());
    config.epochs = j.at("epochs").get<std::size_t>();
    config.adam.beta1 = j.at("beta1").get<double>();
    config.adam.beta2 = j.at("beta2").get<double>();
    config.adam.epsilon = j.at("epsilon").get<double>();
    config.base_lr = j.at("base_lr").get<double>();
    config.max_lr = j.at("max_lr").get<double>();
    config.step_size_up = j.at("step_size_up").get<std::size_t>();
    config.step_size_down = j.at("step_size_down").get<std::size_t>();
    config.grad_clip = j.at("grad_clip").get<double>();
    config.train_fraction = j.at("train_fraction").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.batch_mode = batch_mode_from_name(j.at("batch_mode").get<std::string>());
    return config;
}

nlohmann::json checkpoint_to_json(const TrainedCheckpoint& checkpoint) {
    const MlpModel& model = checkpoint.model;
    nlohmann::json j{
        {"format", "mff-checkpoint"},
        {"version", kCheckpointVersion},
        {"layer_sizes", {model.input_dim(), model.hidden1(), model.hidden2(), 1}},
        {"activation", activation_name(model.activation())},
        {"parameters",
         {{"w1", model.w1()},
          {"b1", model.b1()},
          {"w2", model.w2()},
          {"b2", model.b2()},
          {"w3", model.w3()},
          {"b3", model.b3()}}},
        {"config", config_to_json(checkpoint.config)},
        {"best_epoch", checkpoint.best_epoch},
        {"best_loss", checkpoint.best_loss},
    };
    j["feature_scaler"] =
        checkpoint.feature_scaler ? scaler_to_json(*checkpoint.feature_scaler) : nlohmann::json();
    j["target_scaler"] =
        checkpoint.target_scaler ? scaler_to_json(*checkpoint.target_scaler) : nlohmann::json();
    return j;
}

TrainedCheckpoint checkpoint_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "mff-checkpoint") {
        throw Error("CorruptCheckpoint", "file is not an mff checkpoint");
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
        throw Error("CorruptCheckpoint",
                    "unsupported checkpoint version " + j.at("version").dump());
    }

    const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    if (sizes.size() != 4 || sizes[3] != 1) {
        throw Error("CorruptCheckpoint", "layer_sizes must be [input, hidden1, hidden2, 1]");
    }

    MlpModel model(sizes[0], sizes[1], sizes[2],
                   activation_from_name(j.at("activation").get<std::string>()));
    const nlohmann::json& p = j.at("parameters");
    model.set_parameters(p.at("w1").get<std::vector<double>>(), p.at("b1").get<std::vector<double>>(),
                         p.at("w2").get<std::vector<double>>(), p.at("b2").get<std::vector<double>>(),
                         p.at("w3").get<std::vector<double>>(), p.at("b3").get<std::vector<double>>());

    TrainedCheckpoint checkpoint{config_from_json(j.at("config")),
                                 std::move(model),
                                 j.at("best_epoch").get<std::size_t>(),
                                 j.at("best_loss").get<double>(),
                                 std::nullopt,
                                 std::nullopt,
                                 {}};
    if (!j.at("feature_scaler").is_null()) {
        checkpoint.feature_scaler = scaler_from_json(j.at("feature_scaler"));
    }
    if (!j.at("target_scaler").is_null()) {
        checkpoint.target_scaler = scaler_from_json(j.at("target_scaler"));
    }
    return checkpoint;
}

void save_checkpoint(const TrainedCheckpoint& checkpoint, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw Error("WriteFailed", "cannot open checkpoint file for writing: " + path);
    file << checkpoint_to_json(checkpoint).dump(2) << '\n';
    if (!file) throw Error("WriteFailed", "failed writing checkpoint to " + path);
}

TrainedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Error("MissingFile", "cannot open checkpoint file: " + path);
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("CorruptCheckpoint", "cannot parse checkpoint JSON: " + std::string(e.what()));
    }
    try {
        return checkpoint_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error("CorruptCheckpoint", "checkpoint JSON is missing fields: " + std::string(e.what()));
    }
}

}  // namespace mff
