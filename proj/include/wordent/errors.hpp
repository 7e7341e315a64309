#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wordent {

// Base for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input bytes are not valid UTF-8. Carries the offset of the offending byte.
class IngestError : public Error {
public:
    IngestError(const std::string& msg, std::size_t byte_offset)
        : Error(msg), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// File could not be opened or read.
class IoError : public Error {
public:
    using Error::Error;
};

// Invalid configuration value (alphabet size, node count, generator spec...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its stated precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Input is formally valid but statistically degenerate (zero variance, all x equal).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to converge. Carries the residual it reached.
class NumericError : public Error {
public:
    NumericError(const std::string& msg, double residual)
        : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace wordent
