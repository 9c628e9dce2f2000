#include "dedesum/numeric.hpp"

namespace dedesum {

Rat parse_rat(std::string_view s) {
  if (s.empty()) throw InvalidArgumentError("empty rational literal");
  std::string t(s);
  try {
    Rat r(t);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw InvalidArgumentError("bad rational literal: " + t);
  }
}

Egcd egcd(std::int64_t a, std::int64_t b) {
  // Invariant: r0 = x0*a + y0*b, r1 = x1*a + y1*b.
  std::int64_t r0 = a, r1 = b;
  std::int64_t x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t;
    t = r0 - q * r1; r0 = r1; r1 = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
  return {r0, x0, y0};
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  if (m <= 0) throw InvalidArgumentError("inv_mod: modulus must be positive");
  auto [g, x, y] = egcd(i64_mod(a, m), m);
  (void)y;
  if (g != 1) throw CoprimalityError("inv_mod: arguments not coprime");
  return i64_mod(x, m);
}

}  // namespace dedesum
