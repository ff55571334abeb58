#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace smcc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidElementError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class CapacityViolationError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSummaryError : public Error {
 public:
  using Error::Error;
};

class TooLargeError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

// Cooperative wall-clock budget, checked at query/batch boundaries.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after_seconds(double s) {
    Deadline d;
    d.armed_ = true;
    d.end_ = std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(s));
    return d;
  }
  bool expired() const {
    return armed_ && std::chrono::steady_clock::now() > end_;
  }
  void check() const {
    if (expired()) throw TimeoutError("run exceeded wall-clock budget");
  }

 private:
  bool armed_ = false;
  std::chrono::steady_clock::time_point end_{};
};

}  // namespace smcc
