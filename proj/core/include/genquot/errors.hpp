#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace genquot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: wrong dimensions, invalid flags, unknown suite ids.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite data or a numerically degenerate object.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The simplex iteration cap was exceeded.
class SolverStall : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A vector handed to the gauge is outside the column span of the body.
class NotInSpan : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Least-squares fit on degenerate data.
class FitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(what + ": " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A constructive search exhausted its retry budget. `tag` names the violated
/// inequality ("el2" or "fin").
class ConditionFailed : public Error {
 public:
  ConditionFailed(std::string tag, double measured, double bound,
                  const std::string& detail)
      : Error("condition " + tag + " failed: " + detail),
        tag_(std::move(tag)),
        measured_(measured),
        bound_(bound) {}

  const std::string& tag() const noexcept { return tag_; }
  double measured() const noexcept { return measured_; }
  double bound() const noexcept { return bound_; }

 private:
  std::string tag_;
  double measured_;
  double bound_;
};

}  // namespace genquot
