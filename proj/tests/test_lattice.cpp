#include "doctest.h"

#include <algorithm>
#include <vector>

#include "dedesum/lattice.hpp"
#include "dedesum/numtheory.hpp"
#include "dedesum/rng.hpp"

using namespace dedesum;

namespace {

std::vector<std::vector<Int>> rows_from(std::initializer_list<std::initializer_list<long>> init) {
  std::vector<std::vector<Int>> rows;
  for (const auto& r : init) {
    std::vector<Int> row;
    for (long v : r) row.emplace_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Brute-force membership of an integer vector in the span of rows, by
// solving against the echelon structure of a freshly reduced copy.
bool in_span_oracle(const std::vector<std::vector<Int>>& rows, std::vector<Int> v) {
  std::vector<std::vector<Int>> work = rows;
  size_t ncols = v.size();
  size_t top = 0;
  for (size_t col = 0; col < ncols; ++col) {
    // gcd-eliminate column below top, including v
    for (;;) {
      size_t piv = top;
      bool found = false;
      for (size_t i = top; i < work.size(); ++i)
        if (work[i][col] != 0 && (!found || int_abs(work[i][col]) < int_abs(work[piv][col]))) {
          piv = i;
          found = true;
        }
      if (!found) break;
      std::swap(work[top], work[piv]);
      bool clear = true;
      for (size_t i = top + 1; i < work.size(); ++i) {
        if (work[i][col] == 0) continue;
        Int q = floor_div(work[i][col], work[top][col]);
        for (size_t k = 0; k < ncols; ++k) work[i][k] -= q * work[top][k];
        if (work[i][col] != 0) clear = false;
      }
      if (clear) break;
    }
    if (top < work.size() && work[top][col] != 0) {
      if (v[col] % work[top][col] == 0) {
        Int q = v[col] / work[top][col];
        for (size_t k = 0; k < ncols; ++k) v[k] -= q * work[top][k];
      }
      ++top;
    }
    if (v[col] != 0) return false;
  }
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("hnf basics") {
  CHECK(hnf(rows_from({{2, 0}, {0, 2}, {4, 2}})) == rows_from({{2, 0}, {0, 2}}));
  CHECK(hnf(rows_from({{1, 0}, {0, 1}})) == rows_from({{1, 0}, {0, 1}}));
  CHECK(hnf(rows_from({{0, 0, 0}})).empty());

  SUBCASE("idempotent and span-preserving") {
    Rng rng(12001);
    for (int rep = 0; rep < 30; ++rep) {
      size_t nrows = 1 + rng.below(4), ncols = 1 + rng.below(4);
      std::vector<std::vector<Int>> rows(nrows, std::vector<Int>(ncols));
      for (auto& r : rows)
        for (auto& v : r) v = Int(static_cast<long>(rng.range(-9, 9)));
      auto h = hnf(rows);
      CHECK(hnf(h) == h);
      for (const auto& r : rows) CHECK(in_span_oracle(h, r));
      for (const auto& r : h) CHECK(in_span_oracle(rows, r));
    }
  }

  SUBCASE("canonical under unimodular row operations") {
    Rng rng(12002);
    auto rows = rows_from({{6, 4, -2}, {2, 0, 8}, {0, 10, 5}});
    auto expected = hnf(rows);
    for (int rep = 0; rep < 20; ++rep) {
      auto shuffled = rows;
      // random row swaps and integer row additions preserve the span
      for (int k = 0; k < 8; ++k) {
        size_t i = rng.below(shuffled.size()), j = rng.below(shuffled.size());
        if (i != j) {
          std::int64_t mult = rng.range(-3, 3);
          for (size_t col = 0; col < shuffled[i].size(); ++col)
            shuffled[i][col] += Int(static_cast<long>(mult)) * shuffled[j][col];
        }
        std::swap(shuffled[rng.below(shuffled.size())], shuffled[rng.below(shuffled.size())]);
      }
      CHECK(hnf(shuffled) == expected);
    }
  }
}

TEST_CASE("lattice from values") {
  SUBCASE("{2, 2*omega} spans 2Z[omega]") {
    std::vector<CyclotomicNumber> values{CyclotomicNumber::from_rat(3, Rat(2)),
                                         CyclotomicNumber::root_of_unity(1, 3) * Rat(2)};
    IntegerLattice lat = IntegerLattice::from_values(values, 3);
    CHECK(lat == IntegerLattice::scaled_ring(3, Rat(2)));
    CHECK(lat.pretty() == "2Z[omega]");
  }
  SUBCASE("{1/3} in Q gives (1/3)Z") {
    IntegerLattice lat =
        IntegerLattice::from_values({CyclotomicNumber::from_rat(1, make_rat(1, 3))}, 1);
    CHECK(lat.denominator() == 3);
    CHECK(lat.basis() == rows_from({{1}}));
    CHECK(lat.pretty() == "(1/3)Z");
  }
  SUBCASE("{2, 3} in Q gives Z") {
    IntegerLattice lat = IntegerLattice::from_values(
        {CyclotomicNumber::from_rat(1, Rat(2)), CyclotomicNumber::from_rat(1, Rat(3))}, 1);
    CHECK(lat == IntegerLattice::scaled_ring(1, Rat(1)));
    CHECK(lat.pretty() == "Z");
  }
}

TEST_CASE("contains / equals / sublattice") {
  IntegerLattice two_zw = IntegerLattice::scaled_ring(3, Rat(2));
  CHECK(two_zw.contains(CyclotomicNumber::root_of_unity(1, 3) * Rat(2)));
  CHECK_FALSE(IntegerLattice::scaled_ring(1, Rat(2))
                  .contains(CyclotomicNumber::from_rat(1, Rat(3))));

  IntegerLattice z = IntegerLattice::scaled_ring(1, Rat(1));
  IntegerLattice third = IntegerLattice::scaled_ring(1, make_rat(1, 3));
  CHECK(is_sublattice(z, third));
  CHECK_FALSE(is_sublattice(third, z));
  CHECK_FALSE(z == third);

  SUBCASE("construction generators are contained") {
    Rng rng(12003);
    std::vector<CyclotomicNumber> values;
    for (int i = 0; i < 6; ++i) {
      std::vector<Rat> raw(euler_phi(12));
      for (auto& v : raw) v = make_rat(rng.range(-5, 5), rng.range(1, 6));
      values.push_back(CyclotomicNumber::from_power_coeffs(12, raw));
    }
    IntegerLattice lat = IntegerLattice::from_values(values, 12);
    for (const auto& v : values) CHECK(lat.contains(v));
  }

  SUBCASE("scaled ring built two ways agrees") {
    std::vector<CyclotomicNumber> gens;
    for (std::int64_t k = 0; k < euler_phi(8); ++k)
      gens.push_back(CyclotomicNumber::root_of_unity(k, 8) * make_rat(5, 3));
    CHECK(IntegerLattice::from_values(gens, 8) == IntegerLattice::scaled_ring(8, make_rat(5, 3)));
  }
}

TEST_CASE("membership agrees with explicit integer combinations") {
  Rng rng(12005);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<CyclotomicNumber> values;
    for (int i = 0; i < 5; ++i) {
      std::vector<Rat> raw(euler_phi(5));
      for (auto& v : raw) v = make_rat(rng.range(-4, 4), rng.range(1, 3));
      values.push_back(CyclotomicNumber::from_power_coeffs(5, raw));
    }
    IntegerLattice lat = IntegerLattice::from_values(values, 5);
    // random integer combination of the generators is in the lattice
    CyclotomicNumber combo = CyclotomicNumber::zero(5);
    for (const auto& v : values) combo += v * make_rat(rng.range(-6, 6), 1);
    CHECK(lat.contains(combo));
    // adding a fraction of a generator leaves the lattice (denominator grows)
    if (!values[0].is_zero()) {
      CyclotomicNumber off = combo + values[0] / make_rat(7919, 1);
      CHECK_FALSE(lat.contains(off));
    }
  }
}

TEST_CASE("builder is order-independent") {
  Rng rng(12004);
  std::vector<CyclotomicNumber> values;
  for (int i = 0; i < 8; ++i) {
    std::vector<Rat> raw(euler_phi(6));
    for (auto& v : raw) v = make_rat(rng.range(-8, 8), rng.range(1, 5));
    values.push_back(CyclotomicNumber::from_power_coeffs(6, raw));
  }
  IntegerLattice base = IntegerLattice::from_values(values, 6);
  for (int rep = 0; rep < 10; ++rep) {
    for (size_t i = values.size(); i > 1; --i)
      std::swap(values[i - 1], values[rng.below(i)]);
    IntegerLattice perm = IntegerLattice::from_values(values, 6);
    CHECK(perm == base);
    CHECK(perm.denominator() == base.denominator());
  }
}

TEST_CASE("image lattice") {
  DedekindContext ctx(CharacterPair(conrey_character(3, 2), conrey_character(7, 6)));

  ImageOptions exact;
  exact.mode = ImageMode::kExact;
  ImageReport rep = image_lattice(ctx, exact);
  CHECK(rep.lattice.pretty() == "2Z");
  CHECK(rep.verdicts.two_conj);
  CHECK(rep.verdicts.thm16);
  CHECK(rep.verdicts.in_ring);
  CHECK(rep.verdicts.full_rank);
  CHECK(rep.generators_unique > 0);

  SUBCASE("sampled mode is a sublattice of the exact image") {
    ImageOptions sampled;
    sampled.mode = ImageMode::kSampled;
    sampled.sample_budget = 60;
    sampled.seed = 5;
    ImageReport srep = image_lattice(ctx, sampled);
    CHECK(is_sublattice(srep.lattice, rep.lattice));
  }

  SUBCASE("jobs do not change the result") {
    ImageOptions par = exact;
    par.jobs = 4;
    ImageReport prep = image_lattice(ctx, par);
    CHECK(prep.lattice == rep.lattice);
    CHECK(prep.generators_unique == rep.generators_unique);
  }

  SUBCASE("max-c cutoff only skips in sampled mode") {
    ImageOptions sampled;
    sampled.mode = ImageMode::kSampled;
    sampled.sample_budget = 40;
    sampled.max_c = 42;
    sampled.seed = 6;
    ImageReport srep = image_lattice(ctx, sampled);
    CHECK(srep.max_c <= 42);
    CHECK(srep.skipped + srep.generators_total == 40);
  }
}
