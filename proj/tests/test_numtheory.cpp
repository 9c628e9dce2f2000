#include "doctest.h"

#include <set>
#include <vector>

#include "dedesum/numtheory.hpp"
#include "dedesum/rng.hpp"

using namespace dedesum;

namespace {

// Literal-sum oracle for the floor-sum closed form.
Rat literal_floor_sum(const Rat& x, std::int64_t a, std::int64_t n) {
  Rat acc(0);
  for (std::int64_t k = 0; k < n; ++k) {
    Rat term = (x + Rat(static_cast<long>(a * k))) / Rat(static_cast<long>(n));
    acc += Rat(rat_floor(term));
  }
  return acc;
}

// Independent reduced-forms oracle: iterate over b first, deliberately a
// different loop structure than the library's.
std::int64_t reduced_forms_oracle(std::int64_t q) {
  std::int64_t count = 0;
  for (std::int64_t b = -q; b <= q; ++b) {
    std::int64_t num = b * b + q;
    if (num % 4) continue;
    std::int64_t ac = num / 4;
    for (std::int64_t a = 1; a * a <= ac; ++a) {
      if (ac % a) continue;
      std::int64_t cc = ac / a;
      bool reduced = (b < 0 ? -b : b) <= a && a <= cc;
      if (reduced && b < 0 && ((-b == a) || (a == cc))) reduced = false;
      if (reduced) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("sawtooth examples and properties") {
  CHECK(sawtooth(Rat(0)) == 0);
  CHECK(sawtooth(make_rat(1, 2)) == 0);
  CHECK(sawtooth(make_rat(-1, 3)) == make_rat(1, 6));
  CHECK(sawtooth(Rat(7)) == 0);

  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    Rat x = make_rat(rng.range(-400, 400), rng.range(1, 40));
    CHECK(sawtooth(x) + sawtooth(-x) == 0);
    CHECK(sawtooth(x + 1) == sawtooth(x));
  }
}

TEST_CASE("fractional part") {
  CHECK(fractional(make_rat(7, 3)) == make_rat(1, 3));
  CHECK(fractional(make_rat(-1, 4)) == make_rat(3, 4));
  Rng rng(102);
  for (int i = 0; i < 200; ++i) {
    Rat x = make_rat(rng.range(-400, 400), rng.range(2, 40));
    if (is_integer(x)) continue;
    CHECK(fractional(-x) == Rat(1) - fractional(x));
    CHECK(fractional(x) >= 0);
    CHECK(fractional(x) < 1);
  }
}

TEST_CASE("floor_sum closed form vs literal sum") {
  CHECK(floor_sum(make_rat(3, 2), 3, 5) == 5);
  CHECK(floor_sum(Rat(0), 1, 1) == 0);

  Rng rng(103);
  for (int i = 0; i < 1000; ++i) {
    Rat x = make_rat(rng.range(-500, 500), rng.range(1, 24));
    std::int64_t a = rng.range(1, 40);
    std::int64_t n = rng.range(1, 200);
    CAPTURE(a);
    CAPTURE(n);
    CHECK(floor_sum(x, a, n) == literal_floor_sum(x, a, n));
  }
  // a = N branch (d = N)
  for (int i = 0; i < 100; ++i) {
    std::int64_t n = rng.range(1, 60);
    Rat x = make_rat(rng.range(-300, 300), rng.range(1, 12));
    CHECK(floor_sum(x, n, n) == literal_floor_sum(x, n, n));
  }
}

TEST_CASE("factorization helpers") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(8) == 4);
  CHECK(euler_phi(21) == 12);
  CHECK(moebius(1) == 1);
  CHECK(moebius(6) == 1);
  CHECK(moebius(12) == 0);
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(is_squarefree(105));
  CHECK_FALSE(is_squarefree(45));
  CHECK(jacobi(2, 5) == -1);
  CHECK(jacobi(4, 5) == 1);
}

TEST_CASE("unit_group structure") {
  SUBCASE("q = 5: one generator of order 4") {
    UnitGroupStructure ug = unit_group(5);
    REQUIRE(ug.orders.size() == 1);
    CHECK(ug.orders[0] == 4);
    CHECK(multiplicative_order(ug.generators[0], 5) == 4);
  }
  SUBCASE("q = 8: orders (2, 2)") {
    UnitGroupStructure ug = unit_group(8);
    REQUIRE(ug.orders.size() == 2);
    CHECK(ug.orders[0] == 2);
    CHECK(ug.orders[1] == 2);
    // brute-force: the generated subgroup is all of (Z/8)^* = {1,3,5,7}
    std::set<std::int64_t> gen;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::int64_t u = 1;
        for (int k = 0; k < i; ++k) u = u * ug.generators[0] % 8;
        for (int k = 0; k < j; ++k) u = u * ug.generators[1] % 8;
        gen.insert(u);
      }
    CHECK(gen == std::set<std::int64_t>{1, 3, 5, 7});
  }
  SUBCASE("q = 1: trivial") {
    CHECK(unit_group(1).orders.empty());
    CHECK(unit_group(1).order() == 1);
  }
  SUBCASE("generated subgroup has order phi(q) for q <= 500") {
    for (std::int64_t q = 1; q <= 500; ++q) {
      UnitGroupStructure ug = unit_group(q);
      // enumerate products of generator powers
      std::set<std::int64_t> elements{1 % q};
      for (size_t i = 0; i < ug.generators.size(); ++i) {
        std::set<std::int64_t> next;
        for (std::int64_t base : elements) {
          std::int64_t u = base;
          for (std::int64_t e = 0; e < ug.orders[i]; ++e) {
            next.insert(u);
            u = static_cast<std::int64_t>(static_cast<__int128>(u) * ug.generators[i] % q);
          }
        }
        elements = std::move(next);
      }
      CAPTURE(q);
      CHECK(static_cast<std::int64_t>(elements.size()) == euler_phi(q));
    }
  }
}

TEST_CASE("class numbers by reduced forms") {
  CHECK(class_number(7) == 1);
  CHECK(class_number(11) == 1);
  CHECK(class_number(23) == 3);

  SUBCASE("matches independent oracle and h = 1 exactly at the known list") {
    std::vector<std::int64_t> ones;
    for (std::int64_t q = 7; q <= 200; q += 4) {
      if (!is_squarefree(q)) continue;
      REQUIRE(q % 4 == 3);
      std::int64_t h = class_number(q);
      CHECK(h == reduced_forms_oracle(q));
      CHECK(h >= 1);
      if (h == 1) ones.push_back(q);
    }
    CHECK(ones == std::vector<std::int64_t>{7, 11, 19, 43, 67, 163});
  }
  CHECK_THROWS_AS(class_number(5), InvalidArgumentError);   // 1 mod 4
  CHECK_THROWS_AS(class_number(45), InvalidArgumentError);  // not squarefree
  CHECK_THROWS_AS(class_number(3), InvalidArgumentError);   // too small
}

TEST_CASE("int64 helpers") {
  CHECK(i64_floor_div(-7, 2) == -4);
  CHECK(i64_floor_div(7, 2) == 3);
  CHECK(i64_mod(-7, 3) == 2);
  auto [g, x, y] = egcd(240, 46);
  CHECK(g == 2);
  CHECK(240 * x + 46 * y == 2);
  CHECK(inv_mod(3, 7) == 5);
  CHECK_THROWS_AS(inv_mod(2, 4), CoprimalityError);
}
