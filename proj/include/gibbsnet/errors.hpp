#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gibbsnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector lengths or input dimensions disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value is outside the domain of an operation (NaN, infinity, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An argument violates an operation's precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A dataset file could not be parsed or failed validation.
class LoadError : public Error {
public:
    using Error::Error;
};

/// A run config or artifact document is malformed or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// An exact enumeration would exceed the configured size cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling ran out of attempts before collecting enough networks.
class AcceptanceTooLow : public Error {
public:
    AcceptanceTooLow(std::uint64_t accepted, std::uint64_t attempted, std::uint64_t wanted)
        : Error("acceptance too low: accepted " + std::to_string(accepted) + " of " +
                std::to_string(attempted) + " attempts, wanted " + std::to_string(wanted)),
          accepted_(accepted),
          attempted_(attempted),
          wanted_(wanted) {}

    std::uint64_t accepted() const noexcept { return accepted_; }
    std::uint64_t attempted() const noexcept { return attempted_; }
    std::uint64_t wanted() const noexcept { return wanted_; }
    double rate() const noexcept {
        return attempted_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(attempted_);
    }

private:
    std::uint64_t accepted_;
    std::uint64_t attempted_;
    std::uint64_t wanted_;
};

}  // namespace gibbsnet
