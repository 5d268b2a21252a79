#pragma once

#include <stdexcept>
#include <string>

namespace owcsa {

// Invalid configuration (bad field value, violated cross-field invariant).
// Message carries the field path, e.g. "geometry.D_m: must be > 0".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure could not reach its accuracy contract
// (quadrature non-convergence, CF-grid resolution, bracket failure).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace owcsa
