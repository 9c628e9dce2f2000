#pragma once

#include <stdexcept>
#include <string>

namespace dedesum {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A required divisibility (e.g. q1*q2 | c, or m | m') does not hold.
struct DivisibilityError : Error {
  using Error::Error;
};

/// Arguments required to be coprime are not.
struct CoprimalityError : Error {
  using Error::Error;
};

/// Character parity hypothesis chi1*chi2(-1) = 1 violated, or a parity
/// precondition (odd/even) not met.
struct ParityError : Error {
  using Error::Error;
};

/// Matrix is not in the required congruence subgroup.
struct MembershipError : Error {
  using Error::Error;
};

/// Character is not primitive (or is trivial) where a primitive
/// nontrivial character is required.
struct PrimitivityError : Error {
  using Error::Error;
};

/// Arithmetic between cyclotomic numbers with different moduli; callers
/// must lift explicitly.
struct ModulusMismatchError : Error {
  using Error::Error;
};

/// 64-bit matrix arithmetic overflowed.
struct OverflowError : Error {
  using Error::Error;
};

/// Catch-all for malformed input (bad labels, out-of-range parameters).
struct InvalidArgumentError : Error {
  using Error::Error;
};

}  // namespace dedesum
