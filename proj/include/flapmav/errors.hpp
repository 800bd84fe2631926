#pragma once

#include <stdexcept>
#include <string>

namespace flapmav {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed, unknown or out-of-range configuration entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Non-finite state or singular system during integration.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Index outside a lookup table.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

} // namespace flapmav
