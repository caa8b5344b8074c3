#ifndef BWAVE_ERRORS_HPP
#define BWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bwave {

// Invalid user-facing configuration (bad grid sizes, model arity, config files).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation produced NaN/Inf or violated a numerical contract
// (e.g. imaginary residual after an even-real multiplier).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of a function.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested feature cannot be represented on the given grid.
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A tracked characteristic left the region where periodization is valid.
struct domain_escape_error : std::runtime_error {
    explicit domain_escape_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bwave

#endif
