#pragma once

#include <stdexcept>
#include <string>

namespace spherevol {

// Base of every library error; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double value, double error_estimate)
      : Error(what), value_(value), error_estimate_(error_estimate) {}
  double value() const { return value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

class UnwrapAmbiguous : public Error {
 public:
  using Error::Error;
};

class PoincareHopfViolation : public Error {
 public:
  using Error::Error;
};

class ChainViolation : public Error {
 public:
  ChainViolation(const std::string& what, int link) : Error(what), link_(link) {}
  // 1-based index of the first element that exceeds its predecessor.
  int link() const { return link_; }

 private:
  int link_;
};

class LineSearchStalled : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace spherevol
