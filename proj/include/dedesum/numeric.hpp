#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "dedesum/errors.hpp"

namespace dedesum {

// Exact arbitrary-precision integers and rationals. mpq_class keeps
// fractions canonical (reduced, positive denominator) after canonicalize().
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(std::int64_t num, std::int64_t den) {
  return make_rat(Int(static_cast<long>(num)), Int(static_cast<long>(den)));
}

inline Int rat_num(const Rat& x) { return x.get_num(); }
inline Int rat_den(const Rat& x) { return x.get_den(); }

/// Floor of a/b for arbitrary sign of a; requires b != 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// floor(x) for a rational x.
inline Int rat_floor(const Rat& x) {
  return floor_div(x.get_num(), x.get_den());
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

inline Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int int_abs(const Int& a) {
  Int r;
  mpz_abs(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

inline std::int64_t to_i64(const Int& a) {
  if (!a.fits_slong_p()) throw OverflowError("integer does not fit in 64 bits: " + a.get_str());
  return static_cast<std::int64_t>(a.get_si());
}

/// Canonical text form: "p/q" when q != 1, plain "p" otherwise.
inline std::string rat_str(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat parse_rat(std::string_view s);

// ---- checked 64-bit helpers (matrix entries, loop counters) ----

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 add overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 mul overflow");
  return r;
}

inline std::int64_t i64_gcd(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Floor division for int64, any sign of a, b > 0.
inline std::int64_t i64_floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t i64_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  if (r < 0) r += (b < 0 ? -b : b);
  return r;
}

/// Extended gcd: returns g = gcd(a,b) and coefficients with x*a + y*b = g.
struct Egcd {
  std::int64_t g, x, y;
};
Egcd egcd(std::int64_t a, std::int64_t b);

/// Inverse of a modulo m (m > 0); throws CoprimalityError when gcd != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

}  // namespace dedesum
