#pragma once

#include <stdexcept>
#include <string>

namespace chernoff {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class OverflowRisk : public Error {
 public:
  using Error::Error;
};

class NotAContraction : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Raised by the contour quadrature when a node hits the spectrum.
class ContourTooClose : public Error {
 public:
  using Error::Error;
};

}  // namespace chernoff
