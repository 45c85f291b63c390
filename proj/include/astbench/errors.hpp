#pragma once

#include <stdexcept>
#include <string>

namespace astbench {

/// Base class for all workbench errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Vector or matrix dimensions do not match what the operation expects.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Subsection or sample index out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Sweep protocol cannot be carried out as parameterised.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Dataset too small, empty, or otherwise unusable.
class DatasetError : public Error {
public:
    using Error::Error;
};

/// Linear system remained singular after jitter.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Training failed for every requested model spec.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// On-disk artifact has an unknown version, kind, or missing field.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; message carries the offending line number.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Measured force exceeded the safety limit; the trial must stop.
class AbortError : public Error {
public:
    using Error::Error;
};

/// Grip never settled within the tick budget.
class TimeoutError : public Error {
public:
    using Error::Error;
};

/// Trial log is missing a phase required for segmentation.
class SegmentationError : public Error {
public:
    using Error::Error;
};

/// Evaluation window is empty.
class EvaluationError : public Error {
public:
    using Error::Error;
};

} // namespace astbench
