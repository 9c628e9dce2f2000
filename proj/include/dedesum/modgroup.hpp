#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dedesum/characters.hpp"
#include "dedesum/numeric.hpp"
#include "dedesum/rng.hpp"

namespace dedesum {

/// Integer 2x2 matrix of determinant 1. Entries are 64-bit with checked
/// arithmetic; OverflowError on any product that leaves the range.
struct SL2Matrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  SL2Matrix() = default;
  SL2Matrix(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_);

  static SL2Matrix identity() { return SL2Matrix(); }
  static SL2Matrix S() { return SL2Matrix(0, -1, 1, 0); }
  static SL2Matrix T() { return SL2Matrix(1, 1, 0, 1); }
  static SL2Matrix T_pow(std::int64_t k) { return SL2Matrix(1, k, 0, 1); }

  SL2Matrix operator*(const SL2Matrix& o) const;
  SL2Matrix inverse() const { return SL2Matrix(d, -b, -c, a); }
  SL2Matrix operator-() const { return SL2Matrix(-a, -b, -c, -d); }
  bool operator==(const SL2Matrix& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool is_identity() const { return *this == SL2Matrix(); }

  std::string str() const;  // "a,b,c,d"
  static SL2Matrix parse(std::string_view text);
};

bool is_gamma0(const SL2Matrix& g, std::int64_t n);
bool is_gamma1(const SL2Matrix& g, std::int64_t n);

/// Completes a coprime column (a, c) to a determinant-1 matrix; the
/// deterministic choice takes 0 <= d < |c| when c != 0, and b = 0 when
/// c = 0.
SL2Matrix complete_column(std::int64_t a, std::int64_t c);

/// The reciprocity partner (d, -r; -b*q1q2, a) of gamma = (a, b; c, d)
/// with c = r*q1q2, r >= 1.
SL2Matrix dual_gamma(const SL2Matrix& g, std::int64_t q1q2);

/// psi(gamma) = chi1*chi2bar(d), a root of unity in Q(zeta_m); never zero
/// on Gamma_0(q1*q2) since gcd(d, q1q2) = 1.
CyclotomicNumber psi(const SL2Matrix& g, const CharacterPair& pair);

/// Left translation by T^k with k chosen to minimize |a| in its residue
/// class mod c. Fixes (c, d); the sum value is unchanged since
/// S(T^k gamma) = S(T^k) + psi(T^k) S(gamma) = S(gamma).
SL2Matrix reduce_generator(const SL2Matrix& g);

/// One factor of an {S, T}-word: gen is 'S' or 'T', raised to pow.
struct STLetter {
  char gen;
  std::int64_t pow;
};

/// Decomposes gamma into a word in S and T with exact product equality
/// (no projective ambiguity; -I is emitted as S^2).
std::vector<STLetter> st_word(const SL2Matrix& g);

/// Which transversal schreier_generators() uses.
enum class Transversal {
  kSmallLift,  // minimal-entry lift of each bottom-row label (default)
  kBfsTree,    // product of the BFS spanning-tree word
};

/// Coset table of Gamma_1(N) in SL2(Z) for N >= 3 (so -I is not in
/// Gamma_1(N) and cosets biject with bottom rows (c, d) mod N,
/// gcd(c, d, N) = 1). Built by BFS over right multiplication by S and T
/// from the identity coset; transitions are permutations of the labels.
class CosetTable {
 public:
  explicit CosetTable(std::int64_t n);

  std::int64_t level() const { return n_; }
  std::int64_t size() const { return static_cast<std::int64_t>(labels_.size()); }
  std::pair<std::int64_t, std::int64_t> label(std::int64_t i) const { return labels_[i]; }
  std::int64_t index_of(std::int64_t c, std::int64_t d) const;
  /// Index of the coset containing g.
  std::int64_t coset_of(const SL2Matrix& g) const { return index_of(g.c, g.d); }

  std::int64_t step_s(std::int64_t i) const { return trans_s_[i]; }
  std::int64_t step_t(std::int64_t i) const { return trans_t_[i]; }
  /// Apply a signed generator: 'S'/'T' with pow any integer.
  std::int64_t step(std::int64_t i, char gen, std::int64_t pow) const;

  /// Representative as the product of the BFS spanning-tree word.
  /// Entries can grow with tree depth; throws OverflowError past 64 bits.
  SL2Matrix tree_representative(std::int64_t i) const;

  /// Minimal-entry representative: the label's bottom row lifted to a
  /// coprime integer pair of size O(N) and completed with |a| <= |c|/2.
  SL2Matrix small_representative(std::int64_t i) const;

  SL2Matrix representative(std::int64_t i, Transversal kind) const;

 private:
  std::int64_t n_;
  std::vector<std::pair<std::int64_t, std::int64_t>> labels_;
  std::vector<std::int64_t> trans_s_, trans_t_;
  std::vector<std::int64_t> parent_;     // -1 at root
  std::vector<char> parent_gen_;         // 'S' or 'T'
  std::vector<std::int64_t> index_map_;  // N*N flat map -> label index or -1
};

/// Schreier generators {rep(i) * g * rep(i.g)^{-1}} over all cosets and
/// g in {S, T}, identity elements dropped. Every output lies in
/// Gamma_1(N) and the set generates Gamma_1(N).
std::vector<SL2Matrix> schreier_generators(const CosetTable& table,
                                           Transversal kind = Transversal::kSmallLift);
std::vector<SL2Matrix> schreier_generators(std::int64_t n,
                                           Transversal kind = Transversal::kSmallLift);

/// Generator list as a JSON array of "a,b,c,d" strings.
std::string generators_json(const std::vector<SL2Matrix>& gens);

/// Uniform-ish random elements with c = r*N, r in [1, rmax], sampled by
/// completing random coprime columns.
SL2Matrix random_gamma0(std::int64_t n, std::int64_t rmax, Rng& rng);
SL2Matrix random_gamma1(std::int64_t n, std::int64_t rmax, Rng& rng);

}  // namespace dedesum
