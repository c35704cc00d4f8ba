#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ksdyn {

// Base for all model/solver failures so callers can catch one family.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Initial volume outside (0, 1].
class InvalidVolume : public Error {
 public:
  using Error::Error;
};

// Every width is non-positive while the volume still has to grow:
// the saturation equation has no positive root.
class NoPositiveRoot : public Error {
 public:
  using Error::Error;
};

// Iteration budget exhausted; carries the last enclosing interval.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& msg, double lo, double hi)
      : Error(msg), bracket_(lo, hi) {}
  const std::pair<double, double>& bracket() const { return bracket_; }

 private:
  std::pair<double, double> bracket_;
};

// exp(log-volume) falls outside the representable range; the log value
// is still meaningful and is carried along.
class VolumeRangeError : public std::range_error {
 public:
  explicit VolumeRangeError(double log_value)
      : std::range_error("volume outside representable range, log value " +
                         std::to_string(log_value)),
        log_value_(log_value) {}
  double log_value() const { return log_value_; }

 private:
  double log_value_;
};

// Malformed spectrum text input.
class SpectrumFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace ksdyn
