// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace kob {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-ascending index lists, out-of-range shifts, bad
/// file contents.
class InputError : public Error {
public:
  using Error::Error;
};

/// A matrix failed a structural check (Hermitian, unitary, dimension).
class ValidationError : public Error {
public:
  using Error::Error;
};

class ContextMismatch : public Error {
public:
  using Error::Error;
};

/// An eigenvalue sits within b_tol of a window edge, so an open-interval
/// count cannot be trusted.
class BoundaryAmbiguity : public Error {
public:
  using Error::Error;
};

/// A path step is too coarse for the requested gap eta.
class RefinementRequired : public Error {
public:
  using Error::Error;
};

/// A path endpoint has an eigenvalue in [-eta, eta].
class EndpointDegeneracy : public Error {
public:
  using Error::Error;
};

} // namespace kob
