#pragma once

#include <stdexcept>
#include <string>

namespace qlwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a wave-speed functional (e.g. theta < -1).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class SignFlip : public Error {
 public:
  using Error::Error;
};

/// min c(u) fell below the division guard. Signals imminent degeneracy,
/// not a numerical fault.
class NearDegenerate : public Error {
 public:
  using Error::Error;
};

class SolverFault : public Error {
 public:
  using Error::Error;
};

class OutOfBox : public Error {
 public:
  using Error::Error;
};

class MissingDiagnostics : public Error {
 public:
  using Error::Error;
};

/// Boundary contamination makes whole-line integrals unreliable.
class Tainted : public Error {
 public:
  using Error::Error;
};

class SupportError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlwave
