#pragma once

#include <stdexcept>
#include <string>

namespace kinmarket {

// Two families: bad input (exit code 1) and numerical breakdown (exit code 2).

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No upper bracket found for a monotone root search.
class BracketFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Initial price inconsistent with the demand-supply relation.
class InitError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Second moment equals the squared mean: the lognormal collapses to a point mass.
class DegenerateDistribution : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EmptyEnsemble : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AllZeroWealth : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonPositiveSample : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnknownPreset : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace kinmarket
