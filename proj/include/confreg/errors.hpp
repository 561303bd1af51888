#pragma once

#include <stdexcept>
#include <string>

namespace confreg {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Covariance input failed positive-semidefinite validation.
class NotPositiveSemidefinite : public Error {
public:
  explicit NotPositiveSemidefinite(const std::string& what) : Error(what) {}
};

// All-zero covariance: no error direction carries any variance.
class DegenerateCovariance : public Error {
public:
  explicit DegenerateCovariance(const std::string& what) : Error(what) {}
};

// Adaptive quadrature exhausted its subdivision budget.
class ToleranceNotReached : public Error {
public:
  explicit ToleranceNotReached(const std::string& what) : Error(what) {}
};

// Root bracket endpoints do not straddle a sign change.
class NoSignChange : public Error {
public:
  explicit NoSignChange(const std::string& what) : Error(what) {}
};

// A factor grid decreased along an axis; signals a numeric defect upstream.
class MonotonicityViolation : public Error {
public:
  explicit MonotonicityViolation(const std::string& what) : Error(what) {}
};

// Serialized table failed magic/version/checksum/shape validation.
class FormatError : public Error {
public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// Ratios or table of one dimension used where another was required.
class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

}  // namespace confreg
