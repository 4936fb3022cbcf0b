#pragma once

#include <string>
#include <vector>

#include "glidar/cube.hpp"
#include "glidar/raster.hpp"
#include "glidar/scene.hpp"
#include "glidar/weight_field.hpp"

namespace glidar {

// Binary container formats. All integers little-endian; all layouts
// row-major. Every format starts with a 16-byte header:
//   magic[4], u32 width, u32 height, u32 third
// where `third` is the channel / gate / offset count of the payload.
//
//   GLR1  f32 channel planes; a 5-channel file is a full scene
//         (depth f32, reflectivity f32, rgb interleaved u8x3)
//   GLC1  u16 counts [gate][row][col]; `third` = num_gates and an extra
//         u32 max_count follows the header
//   GLM1  u8 raster (masks, region labels)
//   GLW1  f32 weights [row][col][offset]

void save_scene(const Scene& scene, const std::string& path);
Scene load_scene(const std::string& path);

void save_raster(const Raster<float>& raster, const std::string& path);
Raster<float> load_raster(const std::string& path);

/// Multi-plane f32 stack in [plane][row][col] order (GLR1 with N channels).
void save_float_cube(const FloatCube& cube, const std::string& path);
FloatCube load_float_cube(const std::string& path);

void save_mask(const Raster<uint8_t>& mask, const std::string& path);
Raster<uint8_t> load_mask(const std::string& path);

void save_cube(const CountCube& cube, const std::string& path);
CountCube load_cube(const std::string& path);

/// Weight fields are stored per pixel as field_side^2 consecutive f32s.
void save_weights(const WeightField& field, const std::string& path);
WeightField load_weights(const std::string& path);

/// FNV-1a 64-bit hash of a file's bytes; used for pipeline manifests.
uint64_t hash_file(const std::string& path);

}  // namespace glidar
