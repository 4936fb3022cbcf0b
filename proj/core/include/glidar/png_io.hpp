#pragma once

#include <string>

#include "glidar/raster.hpp"

namespace glidar {

void write_png(const RgbImage& image, const std::string& path);
RgbImage read_png(const std::string& path);

}  // namespace glidar
