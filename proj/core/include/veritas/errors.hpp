#pragma once

#include <stdexcept>
#include <string>

namespace veritas {

// Bad configuration: missing resource files, invalid parameter combinations.
// CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: malformed corpus, empty datasets, dimension mismatches.
// CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace veritas
