#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dedesum/numeric.hpp"

namespace dedesum {

/// The m-th cyclotomic polynomial Phi_m, monic with integer coefficients,
/// degree phi(m). coeffs[i] is the coefficient of x^i.
struct CyclotomicPolynomial {
  std::int64_t index = 1;
  std::vector<Int> coeffs;

  std::int64_t degree() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
};

/// Phi_m computed by exact division of x^m - 1 by the product of Phi_d
/// over proper divisors d. Cached per m; thread-safe.
const CyclotomicPolynomial& cyclotomic_polynomial(std::int64_t m);

/// An exact element of Q(zeta_m) in the power basis
/// {1, zeta, ..., zeta^{phi(m)-1}} of Q[x]/(Phi_m(x)).
///
/// Values are immutable in spirit: all operations return new values, and
/// the invariant length(coeffs) = phi(m) with canonical reduced fractions
/// holds after every constructor. Arithmetic between different moduli is
/// a ModulusMismatchError; callers lift() explicitly.
class CyclotomicNumber {
 public:
  CyclotomicNumber() : m_(1), c_(1, Rat(0)) {}

  static CyclotomicNumber zero(std::int64_t m);
  static CyclotomicNumber one(std::int64_t m);
  static CyclotomicNumber from_rat(std::int64_t m, const Rat& value);
  /// zeta_m^k reduced to the power basis; k may be any integer.
  static CyclotomicNumber root_of_unity(std::int64_t k, std::int64_t m);
  /// sum_e coeffs[e] * zeta_m^e for a raw coefficient vector indexed by
  /// exponent e in [0, len); len may exceed phi(m) (reduction applied).
  static CyclotomicNumber from_power_coeffs(std::int64_t m, const std::vector<Rat>& raw);

  std::int64_t modulus_index() const { return m_; }
  const std::vector<Rat>& coordinates() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// The value as a rational; requires is_rational().
  Rat rational_value() const;
  /// True iff every power-basis coefficient is an integer (the power
  /// basis is an integral basis of Z[zeta_m], so this tests membership
  /// in the ring of integers).
  bool is_integral() const;
  /// Least positive D with D * x integral.
  Int denominator() const;

  CyclotomicNumber operator-() const;
  CyclotomicNumber operator+(const CyclotomicNumber& o) const;
  CyclotomicNumber operator-(const CyclotomicNumber& o) const;
  CyclotomicNumber operator*(const CyclotomicNumber& o) const;
  CyclotomicNumber& operator+=(const CyclotomicNumber& o);

  CyclotomicNumber operator*(const Rat& s) const;
  CyclotomicNumber operator/(const Rat& s) const;

  /// Field inverse via extended gcd with Phi_m; throws on zero.
  CyclotomicNumber inverse() const;

  /// Image under the Galois automorphism zeta_m -> zeta_m^{-1}
  /// (complex conjugation).
  CyclotomicNumber conjugate() const;

  /// The same field element in the power basis of Q(zeta_{m'}) for
  /// m | m'; DivisibilityError otherwise.
  CyclotomicNumber lift(std::int64_t m_prime) const;

  bool operator==(const CyclotomicNumber& o) const;
  bool operator!=(const CyclotomicNumber& o) const { return !(*this == o); }

  /// Canonical text form "m:[c0,c1,...]"; bit-exact round trip with parse().
  std::string str() const;
  static CyclotomicNumber parse(std::string_view text);

  /// Numerical embedding zeta_m -> exp(2*pi*i/m). Display and float-only
  /// cross-checks; never used in exact paths.
  std::complex<double> to_complex() const;

 private:
  CyclotomicNumber(std::int64_t m, std::vector<Rat> c) : m_(m), c_(std::move(c)) {}

  std::int64_t m_;
  std::vector<Rat> c_;
};

inline CyclotomicNumber operator*(const Rat& s, const CyclotomicNumber& x) { return x * s; }

}  // namespace dedesum
