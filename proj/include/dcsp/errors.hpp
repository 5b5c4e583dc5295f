#pragma once

#include <stdexcept>
#include <string>

namespace dcsp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A least-squares system whose column span has collapsed. Callers running
/// Monte Carlo trials treat this as an aborted draw.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InsufficientDistinct : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidDegree : public Error {
 public:
  using Error::Error;
};

class DegenerateSignal : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

/// Bad user-supplied parameters (problem sizes, sweep ranges, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dcsp
