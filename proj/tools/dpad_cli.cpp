// Command-line front end: decompose, train, eval, predict, selftest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "dpad/checkpoint.hpp"
#include "dpad/config.hpp"
#include "dpad/dataset.hpp"
#include "dpad/error.hpp"
#include "dpad/memd.hpp"
#include "dpad/model.hpp"
#include "dpad/spectrum.hpp"
#include "dpad/testing/selftest.hpp"
#include "dpad/trainer.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dpad;

namespace {

constexpr int kUsageError = 2;

std::optional<std::uint64_t> seed_from_env() {
    const char* s = std::getenv("DPAD_SEED");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0') throw ConfigError(std::string("DPAD_SEED is not an integer: ") + s);
    return v;
}

CsvSchema schema_for(const std::string& fill) {
    CsvSchema schema;
    if (fill == "forward") schema.missing = MissingPolicy::ForwardFill;
    return schema;
}

std::size_t find_channel(const Dataset& ds, const std::string& name) {
    if (name.empty()) return 0;
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        if (ds.channels[i].name == name) return i;
    }
    throw ValidationError("no channel named '" + name + "'");
}

void write_frequency_summary(const fs::path& path, const std::vector<std::string>& names,
                             const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "component,dominant_bin,cycles_per_sample,energy\n";
    out.precision(17);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto col = m.col(c);
        const std::size_t bin = dominant_bin(col);
        double energy = 0.0;
        for (double v : col) energy += v * v;
        out << names[c] << ',' << bin << ','
            << static_cast<double>(bin) / static_cast<double>(col.size()) << ',' << energy << '\n';
    }
}

struct DecomposeArgs {
    std::string input;
    std::string out;
    std::string channel;
    std::string checkpoint;
    std::string fill = "reject";
    std::size_t k = 6;
    std::size_t levels = 1;
    std::size_t window = 0;
};

int run_decompose(const DecomposeArgs& a) {
    const Dataset ds = load_csv(a.input, schema_for(a.fill));
    const auto& series = ds.channels[find_channel(ds, a.channel)].values;
    fs::create_directories(a.out);

    Matrix comps;
    std::vector<std::string> names;
    if (a.levels == 1 && a.checkpoint.empty()) {
        std::size_t len = a.window == 0 ? series.size() : std::min(a.window, series.size());
        const Series x(std::vector<double>(series.end() - static_cast<std::ptrdiff_t>(len), series.end()));
        comps = mcd_decompose(x, a.k, SiftConfig{}).matrix();
        for (std::size_t i = 1; i < a.k; ++i) names.push_back("imf" + std::to_string(i));
        names.push_back("residual");
    } else {
        std::optional<DPadModel> model;
        if (!a.checkpoint.empty()) {
            model.emplace(std::move(load_checkpoint(a.checkpoint).model));
        } else {
            ModelConfig cfg;
            cfg.components = a.k;
            cfg.levels = a.levels;
            cfg.lookback = a.window == 0 ? std::min<std::size_t>(series.size(), 336) : a.window;
            if (auto s = seed_from_env()) cfg.seed = *s;
            model.emplace(cfg);
        }
        const std::size_t t = model->config().lookback;
        if (series.size() < t) throw ValidationError("series is shorter than the model window");
        comps = model->disentangle(
            std::span<const double>(series).subspan(series.size() - t, t));
        const std::size_t k = model->config().components;
        for (std::size_t leaf = 0; leaf < comps.cols() / k; ++leaf) {
            const std::string prefix = "leaf" + std::to_string(leaf + 1) + "_";
            for (std::size_t i = 1; i < k; ++i) names.push_back(prefix + "imf" + std::to_string(i));
            names.push_back(prefix + "residual");
        }
    }
    write_matrix_csv((fs::path(a.out) / "components.csv").string(), "t", names, comps);
    write_frequency_summary(fs::path(a.out) / "frequency_summary.csv", names, comps);
    std::cerr << "wrote " << comps.cols() << " components of length " << comps.rows() << " to "
              << a.out << "\n";
    return 0;
}

struct TrainArgs {
    std::string config;
    std::string data;
    std::string out;
    std::string fill = "reject";
    std::optional<std::size_t> max_epochs, lookback, horizon, batch_size, patience;
    std::optional<double> learning_rate;
    std::optional<std::uint64_t> seed;
    bool disable_if = false;
    bool quiet = false;
};

int run_train(const TrainArgs& a) {
    ModelConfig cfg = a.config.empty() ? ModelConfig{} : load_config(a.config);
    if (a.max_epochs) cfg.max_epochs = *a.max_epochs;
    if (a.lookback) cfg.lookback = *a.lookback;
    if (a.horizon) cfg.horizon = *a.horizon;
    if (a.batch_size) cfg.batch_size = *a.batch_size;
    if (a.patience) cfg.patience = *a.patience;
    if (a.learning_rate) cfg.learning_rate = *a.learning_rate;
    if (a.seed) cfg.seed = *a.seed;
    if (a.disable_if) cfg.disable_if_module = true;
    if (auto s = seed_from_env()) cfg.seed = *s;
    cfg.validate();

    const Dataset ds = load_csv(a.data, schema_for(a.fill));
    const auto splits = split_chronological(ds, cfg.train_ratio, cfg.val_ratio, cfg.test_ratio,
                                            cfg.lookback + cfg.horizon);
    const auto train_ds = std::make_shared<const Dataset>(splits.train);
    const auto val_ds = std::make_shared<const Dataset>(splits.val);
    const auto test_ds = std::make_shared<const Dataset>(splits.test);
    const WindowSet train_w(train_ds, cfg.lookback, cfg.horizon, cfg.stride);
    const WindowSet val_w(val_ds, cfg.lookback, cfg.horizon, 1);
    const WindowSet test_w(test_ds, cfg.lookback, cfg.horizon, 1);

    DPadModel model(cfg);
    TrainOptions opts;
    if (!a.quiet) {
        opts.on_epoch = [](const EpochRecord& r) {
            std::cerr << "epoch " << r.epoch << "  train_l1 " << r.train_loss << "  val_mse "
                      << r.val_mse << "  val_mae " << r.val_mae << "  (" << r.seconds << " s)\n";
        };
    }
    const TrainingHistory history = train(model, train_w, val_w, opts);
    const ErrorMetrics test = evaluate_model(model, test_w);

    std::vector<std::string> channels;
    for (const auto& c : ds.channels) channels.push_back(c.name);
    save_checkpoint(a.out, model, channels);

    nlohmann::json report = history.to_json();
    report["test_mse"] = test.mse;
    report["test_mae"] = test.mae;
    report["config"] = to_json(cfg);
    std::ofstream(a.out + ".history.json") << report.dump(2) << '\n';
    std::cout << nlohmann::json{{"best_epoch", history.best_epoch},
                                {"val_mse", history.best_val_mse},
                                {"test_mse", test.mse},
                                {"test_mae", test.mae}}
                     .dump()
              << '\n';
    return 0;
}

int run_eval(const std::string& ckpt_path, const std::string& data, std::size_t horizon,
             const std::string& fill) {
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    const ModelConfig& cfg = ckpt.model.config();
    if (horizon == 0) horizon = cfg.horizon;
    if (horizon > cfg.horizon) {
        throw ValidationError("horizon " + std::to_string(horizon) +
                              " exceeds the checkpoint horizon " + std::to_string(cfg.horizon));
    }
    const Dataset ds = load_csv(data, schema_for(fill));
    const auto splits = split_chronological(ds, cfg.train_ratio, cfg.val_ratio, cfg.test_ratio,
                                            cfg.lookback + cfg.horizon);
    const WindowSet test_w(std::make_shared<const Dataset>(splits.test), cfg.lookback, cfg.horizon);
    const ErrorMetrics m = evaluate_model(ckpt.model, test_w, horizon);
    std::cout << nlohmann::json{{"mse", m.mse},
                                {"mae", m.mae},
                                {"horizon", horizon},
                                {"windows", test_w.size()},
                                {"channels", test_w.channel_count()}}
                     .dump()
              << '\n';
    return 0;
}

int run_predict(const std::string& ckpt_path, const std::string& input, const std::string& out,
                const std::string& fill) {
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    const std::size_t t = ckpt.model.config().lookback;
    const Dataset ds = load_csv(input, schema_for(fill));
    if (ds.length() < t) {
        throw ValidationError("input has " + std::to_string(ds.length()) + " rows; the model needs " +
                              std::to_string(t));
    }
    std::vector<std::string> names;
    Matrix forecast(ckpt.model.config().horizon, ds.channel_count());
    for (std::size_t c = 0; c < ds.channel_count(); ++c) {
        names.push_back(ds.channels[c].name);
        const auto& v = ds.channels[c].values;
        const auto pred = ckpt.model.predict(std::span<const double>(v).subspan(v.size() - t, t));
        for (std::size_t h = 0; h < pred.size(); ++h) forecast(h, c) = pred[h];
    }
    write_matrix_csv(out, "step", names, forecast);
    return 0;
}

int run_selftest() {
    const auto results = testing::run_selftest(&std::cout);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (failed == 0 ? "selftest passed" : "selftest FAILED") << " (" << results.size() - failed
              << "/" << results.size() << ")\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"D-PAD decomposition and forecasting"};
    app.require_subcommand(1);

    DecomposeArgs dec;
    auto* decompose = app.add_subcommand("decompose", "Decompose a series and export components");
    decompose->add_option("--input", dec.input, "CSV with a timestamp column")->required();
    decompose->add_option("--out", dec.out, "Output directory")->required();
    decompose->add_option("--k", dec.k, "Components per decomposition");
    decompose->add_option("--levels", dec.levels, "D-R-D levels (1 = single decomposition)");
    decompose->add_option("--channel", dec.channel, "Channel name (default: first)");
    decompose->add_option("--window", dec.window, "Use only the last N samples");
    decompose->add_option("--checkpoint", dec.checkpoint, "Use a trained model's D-R-D tree");
    decompose->add_option("--fill", dec.fill, "Missing values: reject | forward")
        ->check(CLI::IsMember({"reject", "forward"}));

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
    train_cmd->add_option("--config", tr.config, "JSON config");
    train_cmd->add_option("--data", tr.data, "Training CSV")->required();
    train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
    train_cmd->add_option("--max-epochs", tr.max_epochs);
    train_cmd->add_option("--lookback", tr.lookback);
    train_cmd->add_option("--horizon", tr.horizon);
    train_cmd->add_option("--batch-size", tr.batch_size);
    train_cmd->add_option("--patience", tr.patience);
    train_cmd->add_option("--learning-rate", tr.learning_rate);
    train_cmd->add_option("--seed", tr.seed);
    train_cmd->add_flag("--disable-if", tr.disable_if, "Drop the graph interaction branch");
    train_cmd->add_flag("--quiet", tr.quiet);
    train_cmd->add_option("--fill", tr.fill)->check(CLI::IsMember({"reject", "forward"}));

    std::string ckpt;
    std::string data;
    std::string fill = "reject";
    std::size_t horizon = 0;
    auto* eval = app.add_subcommand("eval", "Report test-split MSE/MAE as JSON");
    eval->add_option("--checkpoint", ckpt)->required();
    eval->add_option("--data", data)->required();
    eval->add_option("--horizon", horizon, "Steps to score (default: model horizon)");
    eval->add_option("--fill", fill)->check(CLI::IsMember({"reject", "forward"}));

    std::string pred_input;
    std::string pred_out;
    auto* predict = app.add_subcommand("predict", "Forecast from the last window of a CSV");
    predict->add_option("--checkpoint", ckpt)->required();
    predict->add_option("--input", pred_input)->required();
    predict->add_option("--out", pred_out)->required();
    predict->add_option("--fill", fill)->check(CLI::IsMember({"reject", "forward"}));

    auto* selftest = app.add_subcommand("selftest", "Run oracle and gradient checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    try {
        if (*decompose) return run_decompose(dec);
        if (*train_cmd) return run_train(tr);
        if (*eval) return run_eval(ckpt, data, horizon, fill);
        if (*predict) return run_predict(ckpt, pred_input, pred_out, fill);
        if (*selftest) return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kUsageError;
}
