#pragma once

// JSON checkpoint container:
//   {"format": "dpad-checkpoint", "version": 1, "config": {...},
//    "channels": [...], "parameters": {name: {"rows", "cols", "data"}}}

#include <string>
#include <vector>

#include "dpad/model.hpp"
#include "json.hpp"

namespace dpad {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    DPadModel model;
    std::vector<std::string> channels;
};

nlohmann::json checkpoint_to_json(const DPadModel& model, const std::vector<std::string>& channels);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::string& path, const DPadModel& model,
                     const std::vector<std::string>& channels);
/// Throws ParseError on a malformed file or unsupported version.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace dpad
