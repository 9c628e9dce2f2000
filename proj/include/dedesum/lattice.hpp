#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dedesum/cyclotomic.hpp"
#include "dedesum/dedekind.hpp"

namespace dedesum {

/// Row Hermite normal form of the row span: pivots positive, entries
/// above pivots reduced into [0, pivot), zero rows dropped. Canonical
/// for the span, hence idempotent.
std::vector<std::vector<Int>> hnf(std::vector<std::vector<Int>> rows);

/// A full- or partial-rank sublattice of (1/D) Z^n: the set
/// (1/D) * rowspan_Z(basis), basis in row HNF, D minimal.
class IntegerLattice {
 public:
  IntegerLattice() = default;

  /// Lattice spanned by D-scaled power-basis coordinates of the values;
  /// all values must share modulus_index.
  static IntegerLattice from_values(const std::vector<CyclotomicNumber>& values,
                                    std::int64_t modulus_index);

  /// scale * Z[zeta_m] (basis scale.num * I, D = scale.den).
  static IntegerLattice scaled_ring(std::int64_t modulus_index, const Rat& scale);

  std::int64_t modulus_index() const { return m_; }
  std::int64_t ambient_rank() const { return ambient_; }
  const Int& denominator() const { return d_; }
  const std::vector<std::vector<Int>>& basis() const { return basis_; }
  std::int64_t rank() const { return static_cast<std::int64_t>(basis_.size()); }

  bool contains(const CyclotomicNumber& x) const;
  bool contains_vector(const std::vector<Rat>& coords) const;

  bool operator==(const IntegerLattice& o) const;

  /// Human-readable name: "2Z", "2Z[i]", "(1/3)Z[omega]", or a basis dump
  /// when the lattice is not a scalar multiple of the ring.
  std::string pretty() const;

  friend bool is_sublattice(const IntegerLattice& inner, const IntegerLattice& outer);
  friend class LatticeBuilder;

 private:
  std::int64_t m_ = 1;
  std::int64_t ambient_ = 1;
  Int d_ = 1;
  std::vector<std::vector<Int>> basis_;

  void normalize();
};

bool is_sublattice(const IntegerLattice& inner, const IntegerLattice& outer);

/// Incremental span builder: add values one at a time; the running basis
/// is compressed periodically so memory stays bounded by the rank.
class LatticeBuilder {
 public:
  explicit LatticeBuilder(std::int64_t modulus_index);
  void add(const CyclotomicNumber& x);
  IntegerLattice finish();

 private:
  std::int64_t m_;
  std::int64_t ambient_;
  Int d_ = 1;
  std::vector<std::vector<Int>> rows_;
};

enum class ImageMode { kExact, kSampled };

struct ImageVerdicts {
  bool two_conj = false;   // image == 2 Z[zeta_m]
  bool thm16 = false;      // image inside (1/gcd(q1,q2)) Z[zeta_m]
  bool in_ring = false;    // image inside Z[zeta_m]
  bool full_rank = false;  // rank == phi(m)
};

struct ImageReport {
  std::string pair_label;
  ImageMode mode = ImageMode::kExact;
  std::int64_t generators_total = 0;   // Schreier generators (or samples)
  std::int64_t generators_unique = 0;  // distinct (a mod c, c) evaluated
  std::int64_t max_c = 0;              // largest c evaluated
  std::int64_t skipped = 0;            // sampled mode only (--max-c cutoff)
  IntegerLattice lattice;
  ImageVerdicts verdicts;
};

struct ImageOptions {
  ImageMode mode = ImageMode::kExact;
  std::int64_t sample_budget = 200;  // sampled mode
  std::int64_t max_c = 0;            // sampled mode: skip c above this (0 = no cutoff)
  int jobs = 1;
  std::uint64_t seed = 0;  // sampled mode substream seed
};

/// The image lattice S(Gamma_1(q1 q2)). Exact mode evaluates the sum on
/// a reduced Schreier generating set of Gamma_1(N) (the image of a group
/// homomorphism is the Z-span of the values on any generating set);
/// sampled mode evaluates on random Gamma_1 elements and yields a lower
/// bound for the image.
ImageReport image_lattice(const DedekindContext& ctx, const ImageOptions& opts);

}  // namespace dedesum
