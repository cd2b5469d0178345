#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace orbitfol {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A variable index beyond the declared ambient dimension.
class VariableOutOfRange : public ParseError {
public:
    using ParseError::ParseError;
};

/// Raised instead of producing inf/nan (division by zero, zero to a negative power).
class EvaluationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NotKillingError : public Error {
public:
    using Error::Error;
};

class DegenerateFamily : public Error {
public:
    using Error::Error;
};

class UnclassifiableConfiguration : public Error {
public:
    using Error::Error;
};

class NotOrthogonalAtAnchor : public Error {
public:
    using Error::Error;
};

/// The family has an open orbit; transversality is vacuous there and is refused.
class OpenOrbitError : public Error {
public:
    using Error::Error;
};

class NotTangent : public Error {
public:
    NotTangent(const std::string& message, Eigen::VectorXd point, double residual)
        : Error(message), point_(std::move(point)), residual_(residual) {}

    const Eigen::VectorXd& point() const noexcept { return point_; }
    double residual() const noexcept { return residual_; }

private:
    Eigen::VectorXd point_;
    double residual_;
};

class UnknownScenario : public Error {
public:
    using Error::Error;
};

/// Scenario file content that does not match the JSON schema.
class ScenarioFormatError : public Error {
public:
    using Error::Error;
};

} // namespace orbitfol
