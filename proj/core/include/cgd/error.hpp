#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(const std::string& what, std::size_t expected, std::size_t actual)
        : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
                std::to_string(actual)) {}
};

class DimensionTooSmall : public Error {
public:
    using Error::Error;
};

/// A diagonal moment state was asked for something only a full state carries.
class ModeMismatch : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class EmptyBatch : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Loss or parameters became non-finite during a run.
class NumericalError : public Error {
public:
    NumericalError(std::size_t step, const std::string& message)
        : Error("step " + std::to_string(step) + ": " + message), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cgd
