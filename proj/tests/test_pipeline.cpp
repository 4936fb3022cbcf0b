#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "glidar/config.hpp"
#include "glidar/error.hpp"
#include "glidar/io.hpp"
#include "glidar/pipeline.hpp"

using namespace glidar;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::vector<char> slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(is),
                             std::istreambuf_iterator<char>());
}

std::vector<std::string> sorted_files(const std::string& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

RunConfig tiny_config() {
    RunConfig cfg = small_config();
    cfg.subsample_fractions = {0.5};
    cfg.fusion.max_iters = 40;
    return cfg;
}

}  // namespace

TEST_CASE("config text round-trips through parse") {
    const RunConfig ref = reference_config();
    const RunConfig parsed = parse_run_config_text(config_to_text(ref), "roundtrip");
    CHECK(config_to_text(parsed) == config_to_text(ref));
    CHECK(parsed.seed == ref.seed);
    CHECK(parsed.scan.spot_px == ref.scan.spot_px);
    CHECK(parsed.scene.blobs.size() == ref.scene.blobs.size());
    CHECK(parsed.fusion.tau_d == ref.fusion.tau_d);
}

TEST_CASE("committed config files match the built-in configurations") {
    const std::string configs = std::string(GLIDAR_SOURCE_DIR) + "/configs";
    {
        std::ifstream is(configs + "/reference.cfg");
        REQUIRE(is.good());
        std::stringstream buf;
        buf << is.rdbuf();
        CHECK(buf.str() == config_to_text(reference_config()));
    }
    {
        std::ifstream is(configs + "/small.cfg");
        REQUIRE(is.good());
        std::stringstream buf;
        buf << is.rdbuf();
        CHECK(buf.str() == config_to_text(small_config()));
    }
}

TEST_CASE("config parser rejects malformed input with field-level messages") {
    SUBCASE("unknown key") {
        CHECK_THROWS_WITH_AS(parse_run_config_text("definitely_not_a_key = 3\n", "t"),
                             doctest::Contains("definitely_not_a_key"), ConfigError);
    }
    SUBCASE("malformed number") {
        CHECK_THROWS_WITH_AS(parse_run_config_text("gate.gate_step_ns = fast\n", "t"),
                             doctest::Contains("gate.gate_step_ns"), ConfigError);
    }
    SUBCASE("missing equals sign") {
        CHECK_THROWS_AS(parse_run_config_text("gate.gate_step_ns 0.25\n", "t"), ConfigError);
    }
    SUBCASE("duplicate key") {
        CHECK_THROWS_AS(parse_run_config_text("seed = 1\nseed = 2\n", "t"), ConfigError);
    }
    SUBCASE("semantic violation") {
        CHECK_THROWS_AS(parse_run_config_text("gate.num_gates = 1\n", "t"), ConfigError);
    }
    SUBCASE("wrong panel count") {
        CHECK_THROWS_AS(parse_run_config_text("scene.panel_offsets_m = 0, 0.1\n", "t"),
                        ConfigError);
    }
    SUBCASE("comments and blank lines are fine") {
        const RunConfig cfg =
            parse_run_config_text("# comment\n\nseed = 9  # trailing\n", "t");
        CHECK(cfg.seed == 9);
    }
}

TEST_CASE("dcr map generation is deterministic and honors the hot fraction") {
    RunConfig cfg = small_config();
    const auto a = cfg.make_dcr_map();
    const auto b = cfg.make_dcr_map();
    CHECK(a == b);
    size_t hot = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > float(cfg.dcr_base_hz)) ++hot;
    CHECK(double(hot) / double(a.size()) == doctest::Approx(cfg.dcr_hot_fraction).epsilon(0.01));
}

TEST_CASE("full pipeline run is byte-identical across reruns") {
    const RunConfig cfg = tiny_config();
    const std::string dir_a = fresh_dir("glidar_pipe_a");
    const std::string dir_b = fresh_dir("glidar_pipe_b");
    cmd_full(cfg, dir_a);
    cmd_full(cfg, dir_b);

    const auto files_a = sorted_files(dir_a);
    const auto files_b = sorted_files(dir_b);
    REQUIRE(files_a == files_b);
    REQUIRE(files_a.size() > 10);
    for (const auto& name : files_a)
        REQUIRE_MESSAGE(slurp(fs::path(dir_a) / name) == slurp(fs::path(dir_b) / name),
                        "file differs between reruns: ", name);

    SUBCASE("re-running one stage in place reproduces its outputs") {
        const auto fit_before = slurp(fs::path(dir_a) / "depth_fit_f50.glr1");
        const auto manifest_before = slurp(fs::path(dir_a) / "manifest.json");
        cmd_fit(cfg, dir_a, 0.5);
        CHECK(slurp(fs::path(dir_a) / "depth_fit_f50.glr1") == fit_before);
        CHECK(slurp(fs::path(dir_a) / "manifest.json") == manifest_before);
    }

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("manifest lists every produced file with its hash") {
    const RunConfig cfg = tiny_config();
    const std::string dir = fresh_dir("glidar_pipe_manifest");
    cmd_simulate(cfg, dir, 1.0);
    cmd_preprocess(cfg, dir, 1.0);

    std::ifstream is(fs::path(dir) / "manifest.json");
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string manifest = buf.str();
    for (const char* name : {"scene.glr1", "cube_full.glc1", "observed_full.glm1",
                             "background_full.glr1", "hotmask.glm1", "cleaned_full.glr1"})
        CHECK_MESSAGE(manifest.find(name) != std::string::npos, "missing from manifest: ",
                      name);
    fs::remove_all(dir);
}

TEST_CASE("fit stage on an all-zero cube reports zero validity without failing") {
    RunConfig cfg = tiny_config();
    cfg.mean_signal_pp = 0.0;
    cfg.background_pp = 0.0;
    cfg.dcr_base_hz = 0.0;
    cfg.dcr_hot_fraction = 0.0;
    cfg.dcr_hot_hz = 0.0;
    const std::string dir = fresh_dir("glidar_pipe_zero");
    cmd_simulate(cfg, dir, 1.0);
    cmd_preprocess(cfg, dir, 1.0);
    cmd_fit(cfg, dir, 1.0);  // must not throw
    const auto valid = load_mask((fs::path(dir) / "valid_fit_full.glm1").string());
    CHECK(count_true(valid) == 0);
    fs::remove_all(dir);
}

TEST_CASE("coverage decreases across the configured fractions") {
    RunConfig cfg = tiny_config();
    cfg.subsample_fractions = {0.5, 0.25};
    const std::string dir = fresh_dir("glidar_pipe_cov");
    for (double f : {1.0, 0.5, 0.25}) cmd_simulate(cfg, dir, f);
    const auto full = load_mask((fs::path(dir) / "observed_full.glm1").string());
    const auto f50 = load_mask((fs::path(dir) / "observed_f50.glm1").string());
    const auto f25 = load_mask((fs::path(dir) / "observed_f25.glm1").string());
    CHECK(count_true(full) == full.size());
    CHECK(count_true(f50) < count_true(full));
    CHECK(count_true(f25) < count_true(f50));
    fs::remove_all(dir);
}

#ifdef GLIDAR_CLI_PATH
namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GLIDAR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("CLI exit codes: 0 success, 2 config error, 3 data error") {
    const std::string dir = fresh_dir("glidar_cli_run");
    const std::string cfg_path = (fs::path(dir) / "run.cfg").string();
    {
        RunConfig cfg = tiny_config();
        std::ofstream os(cfg_path);
        os << config_to_text(cfg);
    }

    CHECK(run_cli("--config " + cfg_path + " --out " + dir + " --stage simulate") == 0);
    CHECK(run_cli("--config " + cfg_path + " --out " + dir + " --stage preprocess") == 0);
    CHECK(run_cli("--config " + cfg_path + " --out " + dir + " --stage fit") == 0);
    CHECK(run_cli("--config " + cfg_path + " --out " + dir + " --stage eval") == 0);

    SUBCASE("missing config file") {
        CHECK(run_cli("--config /nonexistent.cfg --stage simulate --out " + dir) == 2);
    }
    SUBCASE("bad config contents") {
        const std::string bad = (fs::path(dir) / "bad.cfg").string();
        std::ofstream(bad) << "gate.num_gates = 0\n";
        CHECK(run_cli("--config " + bad + " --stage simulate --out " + dir) == 2);
    }
    SUBCASE("bad flag value") {
        CHECK(run_cli("--config " + cfg_path + " --stage fit --fraction 2.0 --out " + dir) ==
              2);
    }
    SUBCASE("missing stage input is a data error") {
        const std::string empty = fresh_dir("glidar_cli_empty");
        CHECK(run_cli("--config " + cfg_path + " --stage fit --out " + empty) == 3);
        fs::remove_all(empty);
    }
    SUBCASE("corrupt cube file is a data error") {
        const std::string broken = fresh_dir("glidar_cli_broken");
        std::ofstream((fs::path(broken) / "cube_full.glc1").string(), std::ios::binary)
            << "GLC1 but nonsense";
        CHECK(run_cli("--config " + cfg_path + " --stage preprocess --out " + broken) == 3);
        fs::remove_all(broken);
    }
    fs::remove_all(dir);
}

TEST_CASE("CLI seed override changes the outputs") {
    const std::string dir_a = fresh_dir("glidar_cli_seed_a");
    const std::string dir_b = fresh_dir("glidar_cli_seed_b");
    const std::string cfg_path = (fs::path(dir_a) / "run.cfg").string();
    std::ofstream(cfg_path) << config_to_text(tiny_config());

    REQUIRE(run_cli("--config " + cfg_path + " --out " + dir_a + " --stage simulate") == 0);
    REQUIRE(run_cli("--config " + cfg_path + " --out " + dir_b +
                    " --stage simulate --seed 777") == 0);
    CHECK_FALSE(slurp(fs::path(dir_a) / "cube_full.glc1") ==
                slurp(fs::path(dir_b) / "cube_full.glc1"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
#endif
