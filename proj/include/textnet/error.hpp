#pragma once

#include <stdexcept>

namespace textnet {

// Error taxonomy mirrors the CLI exit codes:
//   ConfigError -> 1, DataError -> 2, NumericError -> 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace textnet
