#pragma once

#include <stdexcept>
#include <string>

namespace doilab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A tuple passed to joint_diagonalize has a commutator above tolerance.
class NonCommuting : public Error {
 public:
  using Error::Error;
};

// Joint diagonalization could not separate a cluster after all retries.
class DegenerateFailure : public Error {
 public:
  using Error::Error;
};

class NotOffDiagonal : public Error {
 public:
  using Error::Error;
};

class OffGridEigenvalue : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace doilab
