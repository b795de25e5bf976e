#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nambu {

// Error taxonomy shared by all modules.  Structural errors are programmer or
// input-shape errors (dimension, variance, arity); the others correspond to
// contract violations that callers may want to handle individually.

struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedModeError : std::runtime_error {
    explicit UnsupportedModeError(const std::string& what) : std::runtime_error(what) {}
};

struct RestrictionViolation : std::runtime_error {
    explicit RestrictionViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct FlowError : std::runtime_error {
    FlowError(const std::string& what, std::vector<double> last_state)
        : std::runtime_error(what), last_state(std::move(last_state)) {}
    std::vector<double> last_state;
};

struct ChartError : std::runtime_error {
    explicit ChartError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
    std::size_t position = 0;
};

}  // namespace nambu
