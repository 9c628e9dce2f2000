#include "dedesum/numtheory.hpp"

#include <algorithm>

namespace dedesum {

Rat sawtooth(const Rat& x) {
  if (is_integer(x)) return Rat(0);
  return x - Rat(rat_floor(x)) - make_rat(1, 2);
}

Rat fractional(const Rat& x) { return x - Rat(rat_floor(x)); }

Rat floor_sum(const Rat& x, std::int64_t a, std::int64_t n) {
  if (a < 1 || n < 1) throw InvalidArgumentError("floor_sum: a, N must be positive");
  std::int64_t d = i64_gcd(a, n);
  Rat xd = x / Rat(static_cast<long>(d));
  Rat lead = Rat(static_cast<long>(d)) * Rat(rat_floor(xd));
  Rat mid = make_rat((a - 1) * (n - 1), 2);
  Rat tail = make_rat(d - 1, 2);
  return lead + mid + tail;
}

Factorization factorize(std::int64_t n) {
  if (n < 1) throw InvalidArgumentError("factorize: n must be positive");
  Factorization f;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    f.primes.emplace_back(p, e);
  }
  if (n > 1) f.primes.emplace_back(n, 1);
  return f;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = 1;
  for (auto [p, e] : factorize(n).primes) {
    std::int64_t pe = 1;
    for (int i = 1; i < e; ++i) pe *= p;
    phi *= pe * (p - 1);
  }
  return phi;
}

int moebius(std::int64_t n) {
  int sign = 1;
  for (auto [p, e] : factorize(n).primes) {
    if (e > 1) return 0;
    (void)p;
    sign = -sign;
  }
  return sign;
}

bool is_squarefree(std::int64_t n) {
  for (auto [p, e] : factorize(n).primes) {
    (void)p;
    if (e > 1) return false;
  }
  return true;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> divs{1};
  for (auto [p, e] : factorize(n).primes) {
    size_t sz = divs.size();
    std::int64_t pe = 1;
    for (int i = 0; i < e; ++i) {
      pe *= p;
      for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  if (mod <= 0) throw InvalidArgumentError("pow_mod: modulus must be positive");
  if (mod == 1) return 0;
  __int128 acc = 1;
  __int128 b = i64_mod(base, mod);
  while (exp > 0) {
    if (exp & 1) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(acc);
}

int jacobi(std::int64_t a, std::int64_t n) {
  if (n <= 0 || n % 2 == 0) throw InvalidArgumentError("jacobi: n must be odd positive");
  a = i64_mod(a, n);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::int64_t multiplicative_order(std::int64_t a, std::int64_t m) {
  if (i64_gcd(a, m) != 1) throw CoprimalityError("multiplicative_order: gcd(a, m) != 1");
  if (m == 1) return 1;
  std::int64_t phi = euler_phi(m);
  std::int64_t ord = phi;
  for (auto [p, e] : factorize(phi).primes) {
    (void)e;
    while (ord % p == 0 && pow_mod(a, ord / p, m) == 1) ord /= p;
  }
  return ord;
}

std::int64_t primitive_root(std::int64_t prime_power) {
  auto f = factorize(prime_power);
  if (f.primes.size() != 1 || f.primes[0].first == 2)
    throw InvalidArgumentError("primitive_root: odd prime power required");
  std::int64_t phi = euler_phi(prime_power);
  for (std::int64_t g = 2; g < prime_power; ++g) {
    if (i64_gcd(g, prime_power) != 1) continue;
    if (multiplicative_order(g, prime_power) == phi) return g;
  }
  throw Error("primitive_root: none found");  // unreachable for valid input
}

UnitGroupStructure unit_group(std::int64_t q) {
  if (q < 1) throw InvalidArgumentError("unit_group: q must be positive");
  UnitGroupStructure ug;
  ug.modulus = q;
  if (q <= 2) return ug;  // trivial group
  for (auto [p, e] : factorize(q).primes) {
    std::int64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    std::int64_t rest = q / pe;
    // CRT lift: unit u mod pe mapped to x = u (mod pe), x = 1 (mod rest).
    auto lift = [&](std::int64_t u) {
      if (rest == 1) return u;
      std::int64_t inv = inv_mod(i64_mod(rest, pe), pe);
      // x = 1 + rest * t with t = (u - 1) * rest^{-1} mod pe
      __int128 t = static_cast<__int128>(i64_mod(u - 1, pe)) * inv % pe;
      return static_cast<std::int64_t>((1 + static_cast<__int128>(rest) * t) % q);
    };
    if (p == 2) {
      if (e == 1) continue;  // (Z/2)^* trivial
      if (e == 2) {
        ug.generators.push_back(lift(3));
        ug.orders.push_back(2);
      } else {
        ug.generators.push_back(lift(pe - 1));  // -1
        ug.orders.push_back(2);
        ug.generators.push_back(lift(5));
        ug.orders.push_back(pe / 4);
      }
    } else {
      ug.generators.push_back(lift(primitive_root(pe)));
      ug.orders.push_back(euler_phi(pe));
    }
  }
  return ug;
}

std::int64_t class_number(std::int64_t q) {
  if (q <= 4 || q % 4 != 3 || !is_squarefree(q))
    throw InvalidArgumentError("class_number: q must be squarefree, 3 mod 4, and > 4");
  // Reduced forms (a, b, c): b^2 - 4ac = -q, |b| <= a <= c, and b >= 0
  // when |b| = a or a = c. q squarefree forces gcd(a, b, c) = 1.
  std::int64_t count = 0;
  for (std::int64_t a = 1; 3 * a * a <= q; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      std::int64_t num = b * b + q;
      if (num % (4 * a)) continue;
      std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && (b == -a || a == c)) continue;  // counted at b >= 0
      ++count;
    }
  }
  return count;
}

}  // namespace dedesum
