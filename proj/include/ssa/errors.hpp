#pragma once

#include <stdexcept>
#include <string>

namespace ssa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class InvalidSegmentation : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-segmentation"; }
};

/// CSV/JSON input that cannot be interpreted. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
        : Error(what), row_(row), col_(col) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }
    const char* kind() const noexcept override { return "parse-error"; }

private:
    std::size_t row_;
    std::size_t col_;
};

class SingularCovariance : public Error {
public:
    SingularCovariance(const std::string& what, double ratio) : Error(what), ratio_(ratio) {}
    /// smallest / largest eigenvalue of the offending matrix
    double eigenvalue_ratio() const noexcept { return ratio_; }
    const char* kind() const noexcept override { return "singular-covariance"; }

private:
    double ratio_;
};

class InsufficientData : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "insufficient-data"; }
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "dimension-mismatch"; }
};

class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-argument"; }
};

}  // namespace ssa
