#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spce {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A vector that cannot be interpreted as a unit direction (near-zero or
/// corrupted norm).
class InvalidDirectionError : public Error {
public:
    using Error::Error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A closed-form query was made on a model that has none.
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

/// Shared-sample evaluation requested for a model that cannot be evaluated
/// counterfactually (stochastic or contextual models).
class CounterfactualUnsupportedError : public Error {
public:
    using Error::Error;
};

/// A configuration that is syntactically valid but not runnable
/// (e.g. shared sampling with smeared analyzers).
class UnsupportedConfigurationError : public Error {
public:
    using Error::Error;
};

/// A finite run produced no coincidences, so the conditional correlation
/// is undefined. Carries the counts for diagnostics.
class DegenerateRunError : public Error {
public:
    DegenerateRunError(const std::string& what, std::int64_t coincidences,
                       std::int64_t total)
        : Error(what), coincidence_count(coincidences), total_pairs(total) {}

    std::int64_t coincidence_count;
    std::int64_t total_pairs;
};

/// An estimate whose standard error is zero cannot be converted to a z-score.
class DegenerateEstimateError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace spce
