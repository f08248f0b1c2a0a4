#pragma once

#include <string>

#include <json.hpp>

#include "mff/train.hpp"

namespace mff {

/// Config echo as a flat JSON object (also used inside run manifests).
nlohmann::json config_to_json(const TrainConfig& config);
TrainConfig config_from_json(const nlohmann::json& j);

/**
 * Checkpoint JSON: layer sizes, activation name, flat row-major parameter
 * arrays, scaler parameters, config echo, best epoch index and best loss.
 * Doubles are written in shortest round-trip form, so reloading restores
 * every parameter bit-exactly. The loss history is not part of the file;
 * it is exported separately as CSV.
 */
nlohmann::json checkpoint_to_json(const TrainedCheckpoint& checkpoint);
TrainedCheckpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const TrainedCheckpoint& checkpoint, const std::string& path);
TrainedCheckpoint load_checkpoint(const std::string& path);

}  // namespace mff
