#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdimer {

// A caller violated a documented precondition of a numerical routine.
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Physical parameters or states outside their validity domain.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command-line usage problems: unknown flag or subcommand, malformed
// option value, invalid flag combination.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text not conforming to a CLI grammar; offset points at the offending
// character within the parsed string.
struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t offset_)
        : std::runtime_error(message + " (at offset " + std::to_string(offset_) + ")"),
          offset(offset_) {}
    std::size_t offset;
};

// A numerical routine left its validity domain (non-convergence,
// overflow, spectrum outside the expected class).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive time integration failed: step-size underflow or a state
// invariant breached along the trajectory.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qdimer
