#pragma once

#include <stdexcept>
#include <string>

namespace dpad {

/// Bad input to an operation: non-finite samples, shape mismatches, etc.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent hyperparameters detected while building a model or a split.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The relative tolerance is undefined for a zero-energy reference candidate.
class DegenerateSignal : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Training produced a non-finite loss.
class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV / checkpoint parsing failures.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dpad
