#pragma once

#include <stdexcept>
#include <string>

namespace polypen {

// Exception hierarchy. The C API maps these onto pp_status codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inadmissible input: dimension mismatch, non-PSD matrix,
// infeasible start point, out-of-range parameter.
class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// A numeric procedure failed: non-finite iterate, eigen solver or oracle
// non-convergence, no feasible scaling below the cap.
class NumericError : public Error {
public:
  using Error::Error;
};

// Raised by the arithmetic tape when something other than add/multiply is
// attempted on a tape value.
class NonPolynomialOperation : public Error {
public:
  using Error::Error;
};

}  // namespace polypen
