#pragma once

#include <stdexcept>
#include <string>

namespace glidar {

/// Invalid configuration or parameters (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed, missing or inconsistent data (CLI exit code 3).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace glidar
