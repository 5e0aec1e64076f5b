#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pslab {

enum class ErrorKind {
  precondition,
  signature,
  overflow,
  insufficient_data,
  properness,
  partial_ball,
  ill_conditioned,
  degenerate_attractor,
  numeric,
  empty_measure,
  radius_too_small,
  unsupported,
  saturation,
  io,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when a linear form takes (too) negative values on the ball.
class PropernessViolation : public Error {
 public:
  PropernessViolation(const std::string& what, std::vector<std::string> words)
      : Error(ErrorKind::properness, what), offending(std::move(words)) {}
  std::vector<std::string> offending;
};

// Optimizer gave up; best_value is the smallest objective seen.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double best)
      : Error(ErrorKind::numeric, what), best_value(best) {}
  double best_value;
};

}  // namespace pslab
