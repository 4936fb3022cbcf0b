#pragma once

#include <string>

#include "glidar/config.hpp"

namespace glidar {

/// File name tag for a scan fraction: 1.0 -> "full", 0.25 -> "f25",
/// 0.05 -> "f05".
std::string fraction_suffix(double fraction);

// Pipeline stages. Each one is a pure file-to-file transform under
// `out_dir`: it loads the previous stage's outputs, writes its own, and
// records input/output hashes in manifest.json. Any stage can be re-run in
// isolation and reproduces its outputs bit-exactly.

/// Scene synthesis + acquisition: writes scene.glr1, regions.glm1,
/// observed_<tag>.glm1 and cube_<tag>.glc1.
void cmd_simulate(const RunConfig& config, const std::string& out_dir, double fraction = 1.0);

/// Background estimation, hot-pixel masking and subtraction: writes
/// background_<tag>.glr1, hotmask.glm1 and cleaned_<tag>.glr1.
void cmd_preprocess(const RunConfig& config, const std::string& out_dir, double fraction = 1.0);

/// Per-pixel edge fit on the cropped cleaned cube: writes
/// depth_fit_<tag>.glr1 (meters), depth_fit_index_<tag>.glr1 (gate units),
/// intensity_fit_<tag>.glr1 and valid_fit_<tag>.glm1. Exits successfully
/// with a warning when no pixel yields a valid fit.
void cmd_fit(const RunConfig& config, const std::string& out_dir, double fraction = 1.0);

/// Non-local fusion of the sparse fit with RGB guidance: writes
/// weights_r.glw1, weights_d.glw1 (cached), depth_fused_<tag>.glr1,
/// intensity_fused_<tag>.glr1, depth_baseline_<tag>.glr1 and
/// fuse_trace_<tag>.csv. Raises DataError if the objective ever increases.
void cmd_fuse(const RunConfig& config, const std::string& out_dir, double fraction);

/// Metrics against ground truth + renders: writes report_fit_<tag>.json/.csv
/// (and report_fused_<tag>.* when fused rasters exist) plus PNGs.
void cmd_eval(const RunConfig& config, const std::string& out_dir, double fraction = 1.0);

/// Full pipeline: the complete scan plus every configured subsample
/// fraction, fused and evaluated.
void cmd_full(const RunConfig& config, const std::string& out_dir);

}  // namespace glidar
