#pragma once

#include <stdexcept>
#include <string>

namespace pcm {

// Caller passed something malformed (empty input, shape mismatch, k > N, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter set that cannot define a valid potential or run.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Not enough points to compute a statistic.
class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values appeared in an input or during integration.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file content; the message carries row/column context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcm
