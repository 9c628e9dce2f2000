#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dedesum/cyclotomic.hpp"
#include "dedesum/numtheory.hpp"

namespace dedesum {

/// A Dirichlet character mod q, represented by its exponent vector on the
/// canonical unit_group(q) generators: chi(g_i) = zeta_{o_i}^{e_i}.
///
/// Construction precomputes the full value table, order, parity,
/// conductor and primitivity; instances are immutable and cheap to copy.
class DirichletCharacter {
 public:
  DirichletCharacter(std::int64_t q, std::vector<std::int64_t> exponents);

  std::int64_t modulus() const { return q_; }
  const std::vector<std::int64_t>& exponents() const { return exps_; }
  std::int64_t order() const { return order_; }
  /// chi(-1), +1 (even) or -1 (odd).
  int parity() const { return parity_; }
  std::int64_t conductor() const { return conductor_; }
  bool is_primitive() const { return primitive_; }
  bool is_trivial() const { return order_ == 1; }
  bool is_quadratic() const { return order_ == 2; }

  /// Exponent e with chi(n) = zeta_order^e, or -1 when gcd(n, q) > 1.
  std::int64_t value_exponent(std::int64_t n) const {
    return vexp_[i64_mod(n, q_)];
  }

  /// chi(n) as an exact element of Q(zeta_order).
  CyclotomicNumber evaluate(std::int64_t n) const;

  /// The complex-conjugate character chi-bar.
  DirichletCharacter conjugated() const;

  /// The unique primitive character mod conductor() inducing chi.
  DirichletCharacter primitive_part() const;

  /// Conrey label "q.n".
  std::string label() const;
  /// Exponent-vector label "q:[e1,e2,...]".
  std::string exponent_label() const;

  bool operator==(const DirichletCharacter& o) const {
    return q_ == o.q_ && exps_ == o.exps_;
  }

 private:
  std::int64_t q_;
  std::vector<std::int64_t> exps_;
  std::int64_t order_ = 1;
  int parity_ = 1;
  std::int64_t conductor_ = 1;
  bool primitive_ = false;
  std::vector<std::int32_t> vexp_;  // value exponents mod order, -1 on non-units
};

/// All primitive characters mod q (q >= 3), ordered lexicographically by
/// exponent vector.
std::vector<DirichletCharacter> enumerate_primitive(std::int64_t q);

/// All characters mod q, same ordering.
std::vector<DirichletCharacter> enumerate_all(std::int64_t q);

/// Conrey character chi_q(n, .); requires gcd(n, q) = 1.
DirichletCharacter conrey_character(std::int64_t q, std::int64_t n);

/// The Conrey index n with chi = chi_q(n, .).
std::int64_t conrey_index(const DirichletCharacter& chi);

/// Parses "q.n" (Conrey) or "q:[e1,e2,...]" (exponent vector).
DirichletCharacter parse_character(std::string_view label);

/// Gauss sum tau(chi) = sum_n chi(n) zeta_q^n, exact in
/// Q(zeta_{lcm(order, q)}). Requires chi primitive.
CyclotomicNumber gauss_sum(const DirichletCharacter& chi);

/// First generalized Bernoulli value (1/q) sum_{a=0}^{q-1} chi(a) a.
/// Requires chi nontrivial.
CyclotomicNumber bernoulli_b1(const DirichletCharacter& chi);

/// A validated pair (chi1, chi2) of nontrivial primitive characters with
/// chi1*chi2(-1) = 1, together with the shared cyclotomic modulus
/// m = lcm(ord chi1, ord chi2) and cached value tables of the conjugate
/// characters as zeta_m exponents. The tables are what the sum evaluators
/// read in their inner loops.
class CharacterPair {
 public:
  CharacterPair(DirichletCharacter chi1, DirichletCharacter chi2);

  const DirichletCharacter& chi1() const { return chi1_; }
  const DirichletCharacter& chi2() const { return chi2_; }
  std::int64_t q1() const { return chi1_.modulus(); }
  std::int64_t q2() const { return chi2_.modulus(); }
  std::int64_t level() const { return q1() * q2(); }
  std::int64_t m() const { return m_; }
  bool both_odd() const { return chi1_.parity() == -1; }
  bool both_quadratic() const { return chi1_.is_quadratic() && chi2_.is_quadratic(); }

  /// zeta_m exponent of chi1-bar(n), or -1 when chi1-bar(n) = 0.
  std::int64_t chi1bar_exponent(std::int64_t n) const { return e1bar_[i64_mod(n, q1())]; }
  std::int64_t chi2bar_exponent(std::int64_t n) const { return e2bar_[i64_mod(n, q2())]; }
  const std::vector<std::int32_t>& chi1bar_table() const { return e1bar_; }
  const std::vector<std::int32_t>& chi2bar_table() const { return e2bar_; }

  /// chi1-bar(n) as an element of Q(zeta_m); zero on non-units.
  CyclotomicNumber chi1bar_value(std::int64_t n) const;
  CyclotomicNumber chi2bar_value(std::int64_t n) const;

  CharacterPair swapped() const { return CharacterPair(chi2_, chi1_); }

  std::string label() const { return chi1_.label() + "x" + chi2_.label(); }

 private:
  DirichletCharacter chi1_, chi2_;
  std::int64_t m_;
  std::vector<std::int32_t> e1bar_, e2bar_;
};

/// All valid pairs (chi1 primitive mod q1, chi2 primitive mod q2), both
/// nontrivial, with chi1(-1)*chi2(-1) = 1. Empty when q1 or q2 < 3.
std::vector<CharacterPair> valid_pairs(std::int64_t q1, std::int64_t q2);

}  // namespace dedesum
