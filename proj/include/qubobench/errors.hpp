#pragma once

#include <stdexcept>

namespace qubobench {

struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidEmbedding : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleInstance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPenalty : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyGraph : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qubobench
