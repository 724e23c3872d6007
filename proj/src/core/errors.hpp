#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ridgelet {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fourier quadrature with too few nodes for the requested band.
class AliasingError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NotAdmissibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double condition_estimate = 0.0)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by SGD when the loss becomes non-finite. Carries the last parameter
// vector (a..., b..., c...) for which the loss was still finite.
class DivergedError : public NumericError {
 public:
  DivergedError(const std::string& what, std::vector<double> last_finite)
      : NumericError(what), last_finite_(std::move(last_finite)) {}
  const std::vector<double>& last_finite_state() const { return last_finite_; }

 private:
  std::vector<double> last_finite_;
};

}  // namespace ridgelet
