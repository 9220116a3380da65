#pragma once

#include <stdexcept>
#include <string>

namespace hkq {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different variable tables or monomial orders.
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (polynomials, fixtures, root data, quivers).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A Groebner computation hit its basis-size or degree budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Division that was required to be exact left a remainder.
class InexactDivision : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InternalCheckFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace hkq
