#pragma once

#include <stdexcept>
#include <string>

namespace crgen {

// invalid or inconsistent user configuration; CLI exit code 2
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// a request would exceed a configured compute or memory cap; CLI exit code 3
class ResourceCapError : public std::runtime_error {
public:
    explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crgen
