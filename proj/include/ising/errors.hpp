#pragma once

#include <stdexcept>
#include <string>

namespace ising {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed inputs: bad graphs, bad boundary conditions, bad parameters.
struct ValidationError : Error {
  using Error::Error;
};

// Parameter outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// A configured cap (subset enumeration, SAW-tree size) would be exceeded.
struct ResourceError : Error {
  using Error::Error;
};

// Both partition functions of a ratio vanish; the ratio is 0/0.
struct IndeterminateRatioError : Error {
  using Error::Error;
};

// An iteration failed to converge or a verified identity broke down.
struct NumericalError : Error {
  using Error::Error;
};

// A forward-invariance spot check failed.
struct InvarianceViolationError : Error {
  using Error::Error;
};

// File loading problems; messages carry line numbers where applicable.
struct IoError : Error {
  using Error::Error;
};

}  // namespace ising
