#include "glidar/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <type_traits>

#include "glidar/error.hpp"

namespace glidar {
namespace {

void write_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

// Numeric payloads are written through byte-order-stable helpers. On
// little-endian hosts these are straight memcpys of the whole block.
template <typename T>
void write_block(std::ostream& os, const T* data, size_t count) {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(data), std::streamsize(count * sizeof(T)));
    } else {
        for (size_t i = 0; i < count; ++i) {
            unsigned char bytes[sizeof(T)];
            std::memcpy(bytes, &data[i], sizeof(T));
            for (size_t j = 0; j < sizeof(T) / 2; ++j) std::swap(bytes[j], bytes[sizeof(T) - 1 - j]);
            os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
        }
    }
}

template <typename T>
void read_block(std::istream& is, T* data, size_t count) {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(data), std::streamsize(count * sizeof(T)));
    } else {
        for (size_t i = 0; i < count; ++i) {
            unsigned char bytes[sizeof(T)];
            is.read(reinterpret_cast<char*>(bytes), sizeof(T));
            for (size_t j = 0; j < sizeof(T) / 2; ++j) std::swap(bytes[j], bytes[sizeof(T) - 1 - j]);
            std::memcpy(&data[i], bytes, sizeof(T));
        }
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open for reading: " + path);
    return is;
}

struct Header {
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t third = 0;
};

void write_header(std::ostream& os, const char magic[4], uint32_t w, uint32_t h, uint32_t third) {
    os.write(magic, 4);
    write_u32(os, w);
    write_u32(os, h);
    write_u32(os, third);
}

Header read_header(std::istream& is, const char magic[4], const std::string& path) {
    char got[4] = {0, 0, 0, 0};
    is.read(got, 4);
    if (!is || std::memcmp(got, magic, 4) != 0)
        throw DataError("bad magic in " + path + " (expected " + std::string(magic, 4) + ")");
    Header h;
    h.width = read_u32(is);
    h.height = read_u32(is);
    h.third = read_u32(is);
    if (!is) throw DataError("truncated header in " + path);
    if (h.width == 0 || h.height == 0 || h.width > (1u << 20) || h.height > (1u << 20))
        throw DataError("implausible dimensions in " + path);
    return h;
}

void require_complete(std::istream& is, const std::string& path) {
    if (!is) throw DataError("truncated file: " + path);
    is.peek();
    if (!is.eof()) throw DataError("trailing bytes in " + path);
}

}  // namespace

void save_scene(const Scene& scene, const std::string& path) {
    validate_scene(scene);
    auto os = open_out(path);
    const uint32_t w = uint32_t(scene.width());
    const uint32_t h = uint32_t(scene.height());
    write_header(os, "GLR1", w, h, 5);
    write_block(os, scene.depth_m.data().data(), scene.depth_m.size());
    write_block(os, scene.reflectivity.data().data(), scene.reflectivity.size());
    write_block(os, scene.rgb.data().data(), scene.rgb.data().size());
    if (!os) throw DataError("write failed: " + path);
}

Scene load_scene(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, "GLR1", path);
    if (h.third != 5) throw DataError("not a scene file (channel count != 5): " + path);
    Scene scene;
    scene.depth_m = Raster<float>(int(h.width), int(h.height));
    scene.reflectivity = Raster<float>(int(h.width), int(h.height));
    scene.rgb = RgbImage(int(h.width), int(h.height));
    read_block(is, scene.depth_m.data().data(), scene.depth_m.size());
    read_block(is, scene.reflectivity.data().data(), scene.reflectivity.size());
    read_block(is, scene.rgb.data().data(), scene.rgb.data().size());
    require_complete(is, path);
    validate_scene(scene);
    return scene;
}

void save_raster(const Raster<float>& raster, const std::string& path) {
    auto os = open_out(path);
    write_header(os, "GLR1", uint32_t(raster.width()), uint32_t(raster.height()), 1);
    write_block(os, raster.data().data(), raster.size());
    if (!os) throw DataError("write failed: " + path);
}

Raster<float> load_raster(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, "GLR1", path);
    if (h.third != 1) throw DataError("not a single-channel raster: " + path);
    Raster<float> raster(int(h.width), int(h.height));
    read_block(is, raster.data().data(), raster.size());
    require_complete(is, path);
    return raster;
}

void save_float_cube(const FloatCube& cube, const std::string& path) {
    auto os = open_out(path);
    write_header(os, "GLR1", uint32_t(cube.width), uint32_t(cube.height),
                 uint32_t(cube.num_gates));
    write_block(os, cube.values.data(), cube.values.size());
    if (!os) throw DataError("write failed: " + path);
}

FloatCube load_float_cube(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, "GLR1", path);
    FloatCube cube(int(h.width), int(h.height), int(h.third));
    read_block(is, cube.values.data(), cube.values.size());
    require_complete(is, path);
    return cube;
}

void save_mask(const Raster<uint8_t>& mask, const std::string& path) {
    auto os = open_out(path);
    write_header(os, "GLM1", uint32_t(mask.width()), uint32_t(mask.height()), 1);
    write_block(os, mask.data().data(), mask.size());
    if (!os) throw DataError("write failed: " + path);
}

Raster<uint8_t> load_mask(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, "GLM1", path);
    if (h.third != 1) throw DataError("not a single-channel mask: " + path);
    Raster<uint8_t> mask(int(h.width), int(h.height));
    read_block(is, mask.data().data(), mask.size());
    require_complete(is, path);
    return mask;
}

void save_cube(const CountCube& cube, const std::string& path) {
    auto os = open_out(path);
    write_header(os, "GLC1", uint32_t(cube.width), uint32_t(cube.height),
                 uint32_t(cube.num_gates));
    write_u32(os, cube.max_count());
    write_block(os, cube.counts.data(), cube.counts.size());
    if (!os) throw DataError("write failed: " + path);
}

CountCube load_cube(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, "GLC1", path);
    const uint32_t max_count = read_u32(is);
    CountCube cube(int(h.width), int(h.height), int(h.third));
    read_block(is, cube.counts.data(), cube.counts.size());
    require_complete(is, path);
    for (uint16_t v : cube.counts)
        if (v > max_count) throw DataError("count exceeds declared max_count in " + path);
    return cube;
}

void save_weights(const WeightField& field, const std::string& path) {
    auto os = open_out(path);
    write_header(os, "GLW1", uint32_t(field.width()), uint32_t(field.height()),
                 uint32_t(field.offset_count()));
    write_block(os, field.data().data(), field.data().size());
    if (!os) throw DataError("write failed: " + path);
}

WeightField load_weights(const std::string& path) {
    auto is = open_in(path);
    const Header h = read_header(is, "GLW1", path);
    const int side = int(std::sqrt(double(h.third)) + 0.5);
    if (uint32_t(side) * uint32_t(side) != h.third)
        throw DataError("weight offset count is not a square: " + path);
    WeightField field(int(h.width), int(h.height), side);
    read_block(is, field.data().data(), field.data().size());
    require_complete(is, path);
    return field;
}

uint64_t hash_file(const std::string& path) {
    auto is = open_in(path);
    uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof(buf));
        const std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= uint64_t(uint8_t(buf[i]));
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

}  // namespace glidar
