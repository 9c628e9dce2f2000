#include "dedesum/lattice.hpp"

#include <algorithm>
#include <map>

#include "dedesum/numtheory.hpp"
#include "dedesum/parallel.hpp"

namespace dedesum {

std::vector<std::vector<Int>> hnf(std::vector<std::vector<Int>> rows) {
  if (rows.empty()) return rows;
  const std::int64_t ncols = static_cast<std::int64_t>(rows[0].size());
  const std::int64_t nrows = static_cast<std::int64_t>(rows.size());
  for (const auto& r : rows)
    if (static_cast<std::int64_t>(r.size()) != ncols)
      throw InvalidArgumentError("hnf: ragged matrix");

  std::int64_t top = 0;
  for (std::int64_t col = 0; col < ncols && top < nrows; ++col) {
    // Euclidean elimination below `top` in this column.
    for (;;) {
      std::int64_t pivot = -1;
      for (std::int64_t i = top; i < nrows; ++i) {
        if (rows[i][col] == 0) continue;
        if (pivot < 0 || int_abs(rows[i][col]) < int_abs(rows[pivot][col])) pivot = i;
      }
      if (pivot < 0) break;
      std::swap(rows[top], rows[pivot]);
      bool cleared = true;
      for (std::int64_t i = top + 1; i < nrows; ++i) {
        if (rows[i][col] == 0) continue;
        Int q = floor_div(rows[i][col], rows[top][col]);
        for (std::int64_t k = col; k < ncols; ++k) rows[i][k] -= q * rows[top][k];
        if (rows[i][col] != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0)
      for (std::int64_t k = col; k < ncols; ++k) rows[top][k] = -rows[top][k];
    // Reduce entries above the pivot into [0, pivot).
    for (std::int64_t i = 0; i < top; ++i) {
      if (rows[i][col] == 0) continue;
      Int q = floor_div(rows[i][col], rows[top][col]);
      if (q == 0) continue;
      for (std::int64_t k = col; k < ncols; ++k) rows[i][k] -= q * rows[top][k];
    }
    ++top;
  }
  rows.resize(top);
  return rows;
}

void IntegerLattice::normalize() {
  Int g = d_;
  for (const auto& row : basis_)
    for (const Int& v : row) g = int_gcd(g, v);
  if (g > 1) {
    d_ /= g;
    for (auto& row : basis_)
      for (Int& v : row) v /= g;
  }
}

IntegerLattice IntegerLattice::from_values(const std::vector<CyclotomicNumber>& values,
                                           std::int64_t modulus_index) {
  LatticeBuilder builder(modulus_index);
  for (const auto& v : values) builder.add(v);
  return builder.finish();
}

IntegerLattice IntegerLattice::scaled_ring(std::int64_t modulus_index, const Rat& scale) {
  if (scale <= 0) throw InvalidArgumentError("scaled_ring: positive scale required");
  IntegerLattice lat;
  lat.m_ = modulus_index;
  lat.ambient_ = euler_phi(modulus_index);
  lat.d_ = rat_den(scale);
  lat.basis_.assign(lat.ambient_, std::vector<Int>(lat.ambient_, Int(0)));
  for (std::int64_t i = 0; i < lat.ambient_; ++i) lat.basis_[i][i] = rat_num(scale);
  return lat;
}

bool IntegerLattice::contains_vector(const std::vector<Rat>& coords) const {
  if (static_cast<std::int64_t>(coords.size()) != ambient_)
    throw InvalidArgumentError("lattice contains: ambient rank mismatch");
  // v = D * x must be an integer vector inside the row span.
  std::vector<Int> v(ambient_);
  for (std::int64_t i = 0; i < ambient_; ++i) {
    Rat scaled = coords[i] * Rat(d_);
    if (!is_integer(scaled)) return false;
    v[i] = rat_num(scaled);
  }
  // Back-substitute against the HNF basis.
  std::int64_t row = 0;
  for (std::int64_t col = 0; col < ambient_; ++col) {
    std::int64_t pcol = -1;
    if (row < rank()) {
      // pivot column of this row = first nonzero entry
      for (std::int64_t k = 0; k < ambient_; ++k)
        if (basis_[row][k] != 0) {
          pcol = k;
          break;
        }
    }
    if (pcol == col) {
      Int q = v[col] / basis_[row][col];
      if (v[col] % basis_[row][col] != 0) return false;
      for (std::int64_t k = col; k < ambient_; ++k) v[k] -= q * basis_[row][k];
      ++row;
    } else if (v[col] != 0) {
      return false;
    }
  }
  return true;
}

bool IntegerLattice::contains(const CyclotomicNumber& x) const {
  if (x.modulus_index() != m_)
    throw ModulusMismatchError("lattice contains: cyclotomic modulus mismatch");
  return contains_vector(x.coordinates());
}

bool is_sublattice(const IntegerLattice& inner, const IntegerLattice& outer) {
  if (inner.ambient_ != outer.ambient_)
    throw InvalidArgumentError("is_sublattice: ambient rank mismatch");
  for (const auto& row : inner.basis_) {
    std::vector<Rat> coords(inner.ambient_);
    for (std::int64_t k = 0; k < inner.ambient_; ++k)
      coords[k] = make_rat(row[k], inner.d_);
    if (!outer.contains_vector(coords)) return false;
  }
  return true;
}

bool IntegerLattice::operator==(const IntegerLattice& o) const {
  // HNF + minimal D is canonical, so structural equality is value equality.
  return ambient_ == o.ambient_ && d_ == o.d_ && basis_ == o.basis_;
}

std::string IntegerLattice::pretty() const {
  auto ring_name = [this]() -> std::string {
    if (ambient_ == 1) return "Z";
    if (m_ == 3 || m_ == 6) return "Z[omega]";
    if (m_ == 4) return "Z[i]";
    return "Z[zeta_" + std::to_string(m_) + "]";
  };
  if (basis_.empty()) return "0";
  // scalar multiple of the ring?
  bool scalar = rank() == ambient_;
  if (scalar) {
    const Int& s = basis_[0][0];
    for (std::int64_t i = 0; i < rank() && scalar; ++i)
      for (std::int64_t k = 0; k < ambient_ && scalar; ++k)
        if (basis_[i][k] != (i == k ? s : Int(0))) scalar = false;
    if (scalar) {
      Rat sc = make_rat(s, d_);
      std::string prefix;
      if (sc != 1) {
        prefix = is_integer(sc) ? rat_num(sc).get_str()
                                : "(" + rat_str(sc) + ")";
      }
      return prefix + ring_name();
    }
  }
  std::string out = "(1/" + d_.get_str() + ") span{";
  for (size_t i = 0; i < basis_.size(); ++i) {
    out += i ? "; " : "";
    out += "[";
    for (size_t k = 0; k < basis_[i].size(); ++k) {
      if (k) out += ",";
      out += basis_[i][k].get_str();
    }
    out += "]";
  }
  return out + "}";
}

LatticeBuilder::LatticeBuilder(std::int64_t modulus_index)
    : m_(modulus_index), ambient_(euler_phi(modulus_index)) {}

void LatticeBuilder::add(const CyclotomicNumber& x) {
  if (x.modulus_index() != m_)
    throw ModulusMismatchError("LatticeBuilder: cyclotomic modulus mismatch");
  if (x.is_zero()) return;
  Int den = x.denominator();
  Int nd = int_lcm(d_, den);
  if (nd != d_) {
    Int scale = nd / d_;
    for (auto& row : rows_)
      for (Int& v : row) v *= scale;
    d_ = nd;
  }
  std::vector<Int> row(ambient_);
  const auto& coords = x.coordinates();
  for (std::int64_t i = 0; i < ambient_; ++i) {
    Rat scaled = coords[i] * Rat(d_);
    row[i] = rat_num(scaled);  // integral: d_ is a multiple of denominator
  }
  rows_.push_back(std::move(row));
  if (static_cast<std::int64_t>(rows_.size()) > 4 * ambient_ + 8) rows_ = hnf(std::move(rows_));
}

IntegerLattice LatticeBuilder::finish() {
  IntegerLattice lat;
  lat.m_ = m_;
  lat.ambient_ = ambient_;
  lat.d_ = d_;
  lat.basis_ = hnf(std::move(rows_));
  lat.normalize();
  rows_.clear();
  d_ = 1;
  return lat;
}

ImageReport image_lattice(const DedekindContext& ctx, const ImageOptions& opts) {
  const std::int64_t n = ctx.level();
  ImageReport report;
  report.pair_label = ctx.pair().label();
  report.mode = opts.mode;

  // Collect the (a mod c, c) inputs whose values span the image.
  std::vector<std::pair<std::int64_t, std::int64_t>> inputs;  // (a0, c), c > 0
  std::map<std::pair<std::int64_t, std::int64_t>, bool> seen;
  auto push = [&](SL2Matrix g) {
    ++report.generators_total;
    if (g.c == 0) return;  // S(T^k) = 0 contributes nothing to the span
    if (g.c < 0) g = -g;   // S(-gamma) = S(gamma)
    std::int64_t a0 = i64_mod(g.a, g.c);
    if (!seen.emplace(std::make_pair(a0, g.c), true).second) return;
    inputs.emplace_back(a0, g.c);
    report.max_c = std::max(report.max_c, g.c);
  };

  if (opts.mode == ImageMode::kExact) {
    CosetTable table(n);
    for (SL2Matrix& g : schreier_generators(table)) push(reduce_generator(g));
  } else {
    Rng rng(opts.seed);
    Rng sub = rng.substream("image.sampled");
    for (std::int64_t i = 0; i < opts.sample_budget; ++i) {
      SL2Matrix g = reduce_generator(random_gamma1(n, 4, sub));
      if (opts.max_c > 0 && (g.c > opts.max_c || g.c < -opts.max_c)) {
        ++report.skipped;
        continue;
      }
      push(g);
    }
  }
  report.generators_unique = static_cast<std::int64_t>(inputs.size());

  std::vector<CyclotomicNumber> values(inputs.size(), CyclotomicNumber::zero(ctx.m()));
  parallel_for(static_cast<std::int64_t>(inputs.size()), opts.jobs, [&](std::int64_t i) {
    values[i] = eval_floor(ctx, inputs[i].first, inputs[i].second);
  });

  LatticeBuilder builder(ctx.m());
  for (const auto& v : values) builder.add(v);
  report.lattice = builder.finish();

  std::int64_t g = i64_gcd(ctx.q1(), ctx.q2());
  report.verdicts.two_conj = report.lattice == IntegerLattice::scaled_ring(ctx.m(), Rat(2));
  report.verdicts.thm16 =
      is_sublattice(report.lattice, IntegerLattice::scaled_ring(ctx.m(), make_rat(1, g)));
  report.verdicts.in_ring =
      is_sublattice(report.lattice, IntegerLattice::scaled_ring(ctx.m(), Rat(1)));
  report.verdicts.full_rank = report.lattice.rank() == report.lattice.ambient_rank();
  return report;
}

}  // namespace dedesum
