// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mupa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of a function
/// (negative power, weight outside [0,1], non-positive gain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector lengths or matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The channel Gram matrix H^H H is singular or too badly conditioned.
class SingularGramError : public Error {
 public:
  using Error::Error;
};

/// The feasible set of a projection is empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An iterative method exhausted its iteration budget or failed certification.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A state variable became NaN or infinite.
class NumericOverflowError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario or channel input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mupa
