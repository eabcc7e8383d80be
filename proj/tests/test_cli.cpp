#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "dpad/config.hpp"
#include "dpad/dataset.hpp"
#include "dpad/testing/selftest.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "dpad_cli_test";

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(DPAD_CLI_PATH) + " " + args;
    cmd += stdout_file.empty() ? " > /dev/null" : " > " + (kWork / stdout_file).string();
    cmd += " 2> " + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_two_tone(const fs::path& path, std::size_t n, std::size_t channels) {
    std::ofstream out(path);
    out << "date";
    for (std::size_t c = 0; c < channels; ++c) out << ",ch" << c;
    out << "\n";
    for (std::size_t t = 0; t < n; ++t) {
        out << t;
        for (std::size_t c = 0; c < channels; ++c) {
            const double td = static_cast<double>(t);
            out << "," << std::sin(2 * M_PI * 0.2 * td) + std::sin(2 * M_PI * 0.02 * td) + 0.5 * c;
        }
        out << "\n";
    }
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
    ~Workspace() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("decompose writes components and a frequency summary") {
    Workspace ws;
    write_two_tone(kWork / "tone.csv", 336, 1);
    REQUIRE(run("decompose --input " + (kWork / "tone.csv").string() + " --out " + (kWork / "out").string() +
                " --k 6 --levels 1") == 0);
    const auto [cols, m] = dpad::read_matrix_csv((kWork / "out" / "components.csv").string());
    CHECK(cols == std::vector<std::string>{"imf1", "imf2", "imf3", "imf4", "imf5", "residual"});
    CHECK(m.rows() == 336);
    const std::string summary = slurp(kWork / "out" / "frequency_summary.csv");
    CHECK(summary.rfind("component,dominant_bin,cycles_per_sample,energy", 0) == 0);
    CHECK(summary.find("imf1,67,") != std::string::npos);

    REQUIRE(run("decompose --input " + (kWork / "tone.csv").string() + " --out " + (kWork / "tree").string() +
                " --k 3 --levels 2 --window 64") == 0);
    const auto [tcols, tm] = dpad::read_matrix_csv((kWork / "tree" / "components.csv").string());
    CHECK(tcols.size() == 6);
    CHECK(tcols.front() == "leaf1_imf1");
    CHECK(tm.rows() == 64);
}

TEST_CASE("train, eval and predict") {
    Workspace ws;
    write_two_tone(kWork / "data.csv", 200, 2);
    dpad::ModelConfig cfg = dpad::testing::tiny_config();
    cfg.max_epochs = 2;
    std::ofstream(kWork / "cfg.json") << dpad::to_json(cfg).dump();
    const std::string ckpt = (kWork / "model.json").string();

    REQUIRE(run("train --quiet --config " + (kWork / "cfg.json").string() + " --data " +
                (kWork / "data.csv").string() + " --out " + ckpt, "train.json") == 0);
    const auto report = nlohmann::json::parse(slurp(kWork / "train.json"));
    CHECK(report.contains("test_mse"));
    CHECK(fs::exists(ckpt));
    CHECK(fs::exists(ckpt + ".history.json"));

    REQUIRE(run("eval --checkpoint " + ckpt + " --data " + (kWork / "data.csv").string(), "eval.json") == 0);
    const auto ev = nlohmann::json::parse(slurp(kWork / "eval.json"));
    CHECK(ev.contains("mse"));
    CHECK(ev.contains("mae"));
    CHECK(ev["horizon"] == 4);
    CHECK(ev["channels"] == 2);

    REQUIRE(run("predict --checkpoint " + ckpt + " --input " + (kWork / "data.csv").string() + " --out " +
                (kWork / "pred.csv").string()) == 0);
    const auto [pcols, pm] = dpad::read_matrix_csv((kWork / "pred.csv").string());
    CHECK(pcols == std::vector<std::string>{"ch0", "ch1"});
    CHECK(pm.rows() == 4);
}

TEST_CASE("errors and exit codes") {
    Workspace ws;
    CHECK(run("selftest") == 0);
    CHECK(run("decompose --bogus") == 2);
    CHECK(run("decompose --input " + (kWork / "missing.csv").string() + " --out " + kWork.string()) == 1);
    CHECK_FALSE(slurp(kWork / "stderr.txt").empty());
}
