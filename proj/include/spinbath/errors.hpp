// errors.hpp: exception types shared by the library and the command-line driver

#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Invalid user input: bad lattice shape, malformed configuration, bad indices.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension or size mismatch between objects that must agree.
class ShapeError : public ConfigError {
public:
    explicit ShapeError(const std::string& what) : ConfigError(what) {}
};

// A numerical procedure failed (non-convergence, norm blow-up, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Chebyshev expansion diverged because the spectrum escaped the bounds.
class SpectralBoundsError : public NumericalError {
public:
    explicit SpectralBoundsError(const std::string& what) : NumericalError(what) {}
};

// Curve fit preconditions not met or the solver did not converge.
class FitError : public NumericalError {
public:
    explicit FitError(const std::string& what) : NumericalError(what) {}
};

// Requested problem exceeds the memory or dense-diagonalization budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace spinbath
