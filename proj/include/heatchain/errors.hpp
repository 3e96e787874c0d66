// errors.hpp: exception types shared by the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace heatchain {

// Invalid input (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    enum class Code { MissingField, NonPositiveParameter, UnknownSpectralKind, Malformed };

    ConfigError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const noexcept { return code_; }

private:
    Code code_;
};

// Any failure of the numerics on a valid input (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NegativeFrequency : public DomainError {
public:
    using DomainError::DomainError;
};

class NegativeEigenvalue : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFiniteIntegrand : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ToleranceNotMet : public NumericalError {
public:
    ToleranceNotMet(const std::string& what, double estimate, double error)
        : NumericalError(what), estimate_(estimate), error_(error) {}
    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

class StationarityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PhysicalityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonPhysical : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularSum : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace heatchain
