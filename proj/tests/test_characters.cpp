#include "doctest.h"

#include <set>
#include <vector>

#include "dedesum/characters.hpp"
#include "dedesum/rng.hpp"

using namespace dedesum;

namespace {

// Quadratic character mod an odd prime as a Jacobi-symbol oracle.
int legendre_oracle(std::int64_t n, std::int64_t p) { return jacobi(n, p); }

std::int64_t primitive_count_formula(std::int64_t q) {
  // sum_{d | q} mu(q/d) phi(d)
  std::int64_t total = 0;
  for (std::int64_t d : divisors(q)) total += moebius(q / d) * euler_phi(d);
  return total;
}

CyclotomicNumber character_sum(const DirichletCharacter& chi) {
  std::int64_t d = chi.order();
  std::vector<Rat> raw(d, Rat(0));
  for (std::int64_t n = 0; n < chi.modulus(); ++n) {
    std::int64_t v = chi.value_exponent(n);
    if (v >= 0) raw[v] += 1;
  }
  return CyclotomicNumber::from_power_coeffs(d, raw);
}

}  // namespace

TEST_CASE("evaluation") {
  DirichletCharacter triv1(1, {});
  CHECK(triv1.evaluate(0) == CyclotomicNumber::one(1));
  CHECK(triv1.evaluate(12345) == CyclotomicNumber::one(1));

  SUBCASE("quadratic characters match the Jacobi oracle") {
    for (std::int64_t p : {3, 5, 7, 11, 13, 23}) {
      DirichletCharacter quad(p, {euler_phi(p) / 2});
      CHECK(quad.order() == 2);
      for (std::int64_t n = 0; n < p; ++n) {
        int oracle = legendre_oracle(n, p);
        if (oracle == 0)
          CHECK(quad.evaluate(n).is_zero());
        else
          CHECK(quad.evaluate(n) == CyclotomicNumber::from_rat(2, Rat(oracle)));
      }
    }
  }

  SUBCASE("chi(1) = 1, vanishing exactly off units, periodicity") {
    for (std::int64_t q : {5, 8, 9, 12, 21}) {
      for (const auto& chi : enumerate_all(q)) {
        CHECK(chi.evaluate(1) == CyclotomicNumber::one(chi.order()));
        for (std::int64_t n = 0; n < q; ++n) {
          CHECK(chi.evaluate(n).is_zero() == (i64_gcd(n, q) != 1));
          CHECK(chi.evaluate(n) == chi.evaluate(n + 5 * q));
        }
      }
    }
  }

  SUBCASE("multiplicativity on random pairs") {
    Rng rng(8001);
    for (std::int64_t q : {7, 9, 15, 16, 35}) {
      for (const auto& chi : enumerate_all(q)) {
        for (int rep = 0; rep < 10; ++rep) {
          std::int64_t x = rng.range(0, 6 * q), y = rng.range(0, 6 * q);
          CHECK(chi.evaluate(x * y) == chi.evaluate(x) * chi.evaluate(y));
        }
      }
    }
  }
}

TEST_CASE("parity") {
  DirichletCharacter quad3(3, {1});
  CHECK(quad3.parity() == -1);
  // mod 8: chi(7) = 1, chi(5) = -1 is the even primitive character
  for (const auto& chi : enumerate_primitive(8)) {
    bool even_values = chi.evaluate(7) == CyclotomicNumber::one(2);
    CHECK((chi.parity() == 1) == even_values);
  }
  // square of any quadratic character is trivial, hence even
  for (std::int64_t q : {3, 5, 7, 8, 11}) {
    for (const auto& chi : enumerate_all(q)) {
      if (!chi.is_quadratic()) continue;
      UnitGroupStructure ug = unit_group(q);
      std::vector<std::int64_t> doubled(chi.exponents());
      for (size_t i = 0; i < doubled.size(); ++i)
        doubled[i] = (2 * doubled[i]) % ug.orders[i];
      DirichletCharacter sq(q, doubled);
      CHECK(sq.is_trivial());
      CHECK(sq.parity() == 1);
    }
  }
}

TEST_CASE("conductor and primitive part") {
  // character mod 9 induced from the quadratic mod 3: order-2 character
  DirichletCharacter induced(9, {euler_phi(9) / 2});
  CHECK(induced.order() == 2);
  CHECK(induced.conductor() == 3);
  CHECK_FALSE(induced.is_primitive());
  DirichletCharacter part = induced.primitive_part();
  CHECK(part.modulus() == 3);
  CHECK(part == DirichletCharacter(3, {1}));

  DirichletCharacter quad5(5, {2});
  CHECK(quad5.conductor() == 5);
  CHECK(quad5.is_primitive());
  CHECK(quad5.primitive_part() == quad5);

  for (std::int64_t q : {4, 6, 9, 10, 12}) {
    DirichletCharacter triv(q, std::vector<std::int64_t>(unit_group(q).orders.size(), 0));
    CHECK(triv.conductor() == 1);
  }

  SUBCASE("primitive part induces the original (values agree on units coprime to q)") {
    for (std::int64_t q : {9, 12, 15, 16, 45}) {
      for (const auto& chi : enumerate_all(q)) {
        DirichletCharacter part = chi.primitive_part();
        CHECK(part.modulus() == chi.conductor());
        CHECK(part.is_primitive());
        for (std::int64_t n = 0; n < q; ++n) {
          if (i64_gcd(n, q) != 1) continue;
          CHECK(part.value_exponent(n) * chi.order() ==
                chi.value_exponent(n) * part.order());
        }
      }
    }
  }
}

TEST_CASE("enumeration of primitive characters") {
  CHECK(enumerate_primitive(3).size() == 1);
  auto mod5 = enumerate_primitive(5);
  REQUIRE(mod5.size() == 3);
  std::multiset<std::int64_t> orders;
  for (const auto& chi : mod5) orders.insert(chi.order());
  CHECK(orders == std::multiset<std::int64_t>{2, 4, 4});
  CHECK(enumerate_primitive(9).size() == euler_phi(9) - euler_phi(3));

  SUBCASE("count matches sum_{d|q} mu(q/d) phi(d) for q <= 100") {
    for (std::int64_t q = 3; q <= 100; ++q) {
      CAPTURE(q);
      CHECK(static_cast<std::int64_t>(enumerate_primitive(q).size()) ==
            primitive_count_formula(q));
    }
  }
}

TEST_CASE("valid pairs") {
  std::int64_t quad_pairs_37 = 0;
  for (const auto& pair : valid_pairs(3, 7))
    if (pair.both_quadratic()) ++quad_pairs_37;
  CHECK(quad_pairs_37 == 1);  // both odd

  std::int64_t quad_pairs_35 = 0;
  for (const auto& pair : valid_pairs(3, 5))
    if (pair.both_quadratic()) ++quad_pairs_35;
  CHECK(quad_pairs_35 == 0);  // odd * even = -1

  CHECK(valid_pairs(1, 7).empty());
  CHECK(valid_pairs(2, 7).empty());

  SUBCASE("pair validation errors are typed") {
    CHECK_THROWS_AS(CharacterPair(DirichletCharacter(3, {1}), DirichletCharacter(5, {2})),
                    ParityError);
    CHECK_THROWS_AS(CharacterPair(DirichletCharacter(3, {0}), DirichletCharacter(7, {3})),
                    PrimitivityError);
    CHECK_THROWS_AS(
        CharacterPair(DirichletCharacter(9, {3}), DirichletCharacter(7, {3})),
        PrimitivityError);  // induced from mod 3, not primitive
  }
}

TEST_CASE("orthogonality") {
  for (std::int64_t q = 3; q <= 100; ++q) {
    for (const auto& chi : enumerate_all(q)) {
      if (chi.is_trivial()) continue;
      CHECK(character_sum(chi).is_zero());
    }
  }

  SUBCASE("separable double sums vanish (random rational f1, f2)") {
    Rng rng(8002);
    CharacterPair pair(DirichletCharacter(3, {1}), DirichletCharacter(7, {3}));
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Rat> f1(3), f2(7);
      for (auto& v : f1) v = make_rat(rng.range(-9, 9), rng.range(1, 7));
      for (auto& v : f2) v = make_rat(rng.range(-9, 9), rng.range(1, 7));
      CyclotomicNumber acc = CyclotomicNumber::zero(pair.m());
      for (std::int64_t a = 0; a < 3; ++a) {
        if (pair.chi1bar_value(a).is_zero()) continue;
        for (std::int64_t b = 0; b < 7; ++b) {
          if (pair.chi2bar_value(b).is_zero()) continue;
          acc += pair.chi1bar_value(a) * pair.chi2bar_value(b) * (f1[a] + f2[b]);
        }
      }
      CHECK(acc.is_zero());
    }
  }
}

TEST_CASE("gauss sums") {
  DirichletCharacter quad3(3, {1});
  CyclotomicNumber tau = gauss_sum(quad3);
  CHECK(tau * tau == CyclotomicNumber::from_rat(tau.modulus_index(), Rat(-3)));

  CHECK(gauss_sum(DirichletCharacter(1, {})) == CyclotomicNumber::one(1));
  CHECK_THROWS_AS(gauss_sum(DirichletCharacter(9, {3})), PrimitivityError);

  SUBCASE("tau(chi) tau(chi-bar) = chi(-1) q for every primitive chi, q <= 30") {
    for (std::int64_t q = 3; q <= 30; ++q) {
      for (const auto& chi : enumerate_primitive(q)) {
        CyclotomicNumber t = gauss_sum(chi);
        CyclotomicNumber tbar = gauss_sum(chi.conjugated());
        REQUIRE(t.modulus_index() == tbar.modulus_index());
        CHECK(t * tbar ==
              CyclotomicNumber::from_rat(t.modulus_index(),
                                         Rat(static_cast<long>(chi.parity() * q))));
      }
    }
  }
}

TEST_CASE("first generalized Bernoulli values") {
  CHECK(bernoulli_b1(DirichletCharacter(3, {1})) ==
        CyclotomicNumber::from_rat(2, make_rat(-1, 3)));
  CHECK(bernoulli_b1(DirichletCharacter(7, {3})) ==
        CyclotomicNumber::from_rat(2, Rat(-1)));  // equals -h(-7)
  CHECK_THROWS_AS(bernoulli_b1(DirichletCharacter(5, {0})), PrimitivityError);

  SUBCASE("even nontrivial characters give 0 (a -> q - a symmetry)") {
    for (std::int64_t q = 3; q <= 30; ++q) {
      for (const auto& chi : enumerate_all(q)) {
        if (chi.is_trivial() || chi.parity() != 1) continue;
        CHECK(bernoulli_b1(chi).is_zero());
      }
    }
  }
}

TEST_CASE("labels round trip") {
  // known Conrey values: chi_5(2, 2) = i
  DirichletCharacter c52 = conrey_character(5, 2);
  CHECK(c52.order() == 4);
  CHECK(c52.value_exponent(2) == 1);
  CHECK(conrey_character(5, 4).is_quadratic());
  CHECK(conrey_character(8, 5).parity() == 1);   // even primitive mod 8
  CHECK(conrey_character(8, 3).parity() == -1);  // odd primitive mod 8
  CHECK(conrey_character(1, 1).is_trivial());

  for (std::int64_t q : {3, 4, 5, 7, 8, 9, 12, 15, 16, 21, 24, 35, 36}) {
    for (const auto& chi : enumerate_primitive(q)) {
      CHECK(parse_character(chi.label()) == chi);
      CHECK(parse_character(chi.exponent_label()) == chi);
    }
  }

  CHECK_THROWS_AS(parse_character("5.2.3x"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_character("whatever"), InvalidArgumentError);
  CHECK_THROWS_AS(conrey_character(5, 10), CoprimalityError);
}
