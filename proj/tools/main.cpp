// glidar: simulate a time-gated single-photon scan of a synthetic scene,
// fit per-pixel depth/intensity, and complete sparse scans by RGB-guided
// non-local fusion.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "glidar/config.hpp"
#include "glidar/error.hpp"
#include "glidar/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "glidar - time-gated single-photon depth imaging simulator and "
        "reconstruction pipeline"};

    std::string config_path;
    std::string out_dir = "out";
    std::string stage = "full";
    uint64_t seed = 0;
    bool seed_set = false;
    double fraction = 0.0;
    bool fraction_set = false;

    app.add_option("--config", config_path, "Run configuration file (key = value text)");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--stage", stage, "Pipeline stage to run")
        ->check(CLI::IsMember({"simulate", "preprocess", "fit", "fuse", "eval", "full"}))
        ->capture_default_str();
    app.add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--fraction", fraction,
                   "Scan-position fraction in (0, 1]; defaults to 1.0 for single stages")
        ->each([&](const std::string&) { fraction_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        glidar::RunConfig cfg =
            config_path.empty() ? glidar::reference_config() : glidar::parse_run_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (fraction_set && (fraction <= 0.0 || fraction > 1.0))
            throw glidar::ConfigError("--fraction must be in (0, 1]");

        if (stage == "full") {
            if (fraction_set) cfg.subsample_fractions = {fraction};
            glidar::cmd_full(cfg, out_dir);
        } else {
            const double f = fraction_set ? fraction : 1.0;
            if (stage == "simulate") glidar::cmd_simulate(cfg, out_dir, f);
            if (stage == "preprocess") glidar::cmd_preprocess(cfg, out_dir, f);
            if (stage == "fit") glidar::cmd_fit(cfg, out_dir, f);
            if (stage == "fuse") {
                if (!fraction_set)
                    throw glidar::ConfigError("--stage fuse requires --fraction");
                glidar::cmd_fuse(cfg, out_dir, f);
            }
            if (stage == "eval") glidar::cmd_eval(cfg, out_dir, f);
        }
    } catch (const glidar::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const glidar::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitDataError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDataError;
    }
    return kExitOk;
}
