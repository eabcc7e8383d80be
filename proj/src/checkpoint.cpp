#include "dpad/checkpoint.hpp"

#include <fstream>

#include "dpad/error.hpp"

namespace dpad {

nlohmann::json checkpoint_to_json(const DPadModel& model, const std::vector<std::string>& channels) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, v] : model.parameters().entries()) {
        params[name] = {{"rows", v.rows()}, {"cols", v.cols()}, {"data", v.value().storage()}};
    }
    return {{"format", "dpad-checkpoint"},
            {"version", kCheckpointVersion},
            {"config", to_json(model.config())},
            {"channels", channels},
            {"parameters", params}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    try {
        if (j.value("format", "") != "dpad-checkpoint") throw ParseError("not a dpad checkpoint");
        if (!j.contains("version")) throw ParseError("checkpoint has no version field");
        const int version = j.at("version").get<int>();
        if (version != kCheckpointVersion) {
            throw ParseError("unsupported checkpoint version " + std::to_string(version));
        }
        DPadModel model(config_from_json(j.at("config")));
        std::vector<std::pair<std::string, Matrix>> values;
        for (const auto& [name, p] : j.at("parameters").items()) {
            values.emplace_back(name, Matrix(p.at("rows").get<std::size_t>(),
                                             p.at("cols").get<std::size_t>(),
                                             p.at("data").get<std::vector<double>>()));
        }
        model.load_values(values);
        return Checkpoint{std::move(model),
                          j.value("channels", std::vector<std::string>{})};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed checkpoint: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("checkpoint does not match its config: ") + e.what());
    } catch (const ValidationError& e) {
        throw ParseError(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::string& path, const DPadModel& model,
                     const std::vector<std::string>& channels) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write checkpoint " + path);
    out << checkpoint_to_json(model, channels).dump();
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("checkpoint " + path + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

}  // namespace dpad
