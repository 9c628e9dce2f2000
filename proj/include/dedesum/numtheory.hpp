#pragma once

#include <cstdint>
#include <vector>

#include "dedesum/numeric.hpp"

namespace dedesum {

/// First Bernoulli function B1 (sawtooth): 0 on integers, otherwise
/// x - floor(x) - 1/2.
Rat sawtooth(const Rat& x);

/// Fractional part {x} = x - floor(x), in [0, 1).
Rat fractional(const Rat& x);

/// Closed form of sum_{k=0}^{N-1} floor((x + a*k)/N) for positive a, N:
/// d*floor(x/d) + (a-1)(N-1)/2 + (d-1)/2 with d = gcd(a, N).
Rat floor_sum(const Rat& x, std::int64_t a, std::int64_t n);

struct Factorization {
  std::vector<std::pair<std::int64_t, int>> primes;  // (p, exponent)
};

Factorization factorize(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
int moebius(std::int64_t n);
bool is_squarefree(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod);

/// Jacobi symbol (a/n) for odd n > 0.
int jacobi(std::int64_t a, std::int64_t n);

/// Multiplicative order of a modulo m; requires gcd(a, m) = 1.
std::int64_t multiplicative_order(std::int64_t a, std::int64_t m);

/// Smallest primitive root modulo an odd prime power p^k.
std::int64_t primitive_root(std::int64_t prime_power);

/// Cyclic decomposition of (Z/q)^*: generators g_i of coprime-CRT factors
/// with orders o_i, such that (e_1,...,e_k) -> prod g_i^{e_i} is a
/// bijection onto the unit group. Odd prime powers contribute one cyclic
/// factor; 2^k (k >= 3) contributes the {-1, 5} pair.
struct UnitGroupStructure {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> generators;
  std::vector<std::int64_t> orders;

  std::int64_t order() const {
    std::int64_t o = 1;
    for (auto f : orders) o *= f;
    return o;
  }
};

UnitGroupStructure unit_group(std::int64_t q);

/// Class number h(-q) counted by reduced positive-definite binary
/// quadratic forms of discriminant -q. Requires q squarefree,
/// q = 3 (mod 4), q > 4 (so -q is a fundamental discriminant with unit
/// count 2).
std::int64_t class_number(std::int64_t q);

}  // namespace dedesum
