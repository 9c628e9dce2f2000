#include "dedesum/modgroup.hpp"

#include <deque>
#include <sstream>

namespace dedesum {

namespace {

std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError(what);
  return static_cast<std::int64_t>(v);
}

__int128 det128(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return static_cast<__int128>(a) * d - static_cast<__int128>(b) * c;
}

}  // namespace

SL2Matrix::SL2Matrix(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
    : a(a_), b(b_), c(c_), d(d_) {
  if (det128(a, b, c, d) != 1) throw InvalidArgumentError("SL2Matrix: determinant must be 1");
}

SL2Matrix SL2Matrix::operator*(const SL2Matrix& o) const {
  __int128 na = static_cast<__int128>(a) * o.a + static_cast<__int128>(b) * o.c;
  __int128 nb = static_cast<__int128>(a) * o.b + static_cast<__int128>(b) * o.d;
  __int128 nc = static_cast<__int128>(c) * o.a + static_cast<__int128>(d) * o.c;
  __int128 nd = static_cast<__int128>(c) * o.b + static_cast<__int128>(d) * o.d;
  return SL2Matrix(checked_i64(na, "SL2 mul overflow"), checked_i64(nb, "SL2 mul overflow"),
                   checked_i64(nc, "SL2 mul overflow"), checked_i64(nd, "SL2 mul overflow"));
}

std::string SL2Matrix::str() const {
  std::ostringstream out;
  out << a << "," << b << "," << c << "," << d;
  return out.str();
}

SL2Matrix SL2Matrix::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::int64_t v[4];
  char comma;
  for (int i = 0; i < 4; ++i) {
    if (i && !(in >> comma && comma == ',')) throw InvalidArgumentError("matrix parse: expected ','");
    if (!(in >> v[i])) throw InvalidArgumentError("matrix parse: expected integer");
  }
  return SL2Matrix(v[0], v[1], v[2], v[3]);
}

bool is_gamma0(const SL2Matrix& g, std::int64_t n) {
  if (n < 1) throw InvalidArgumentError("is_gamma0: level must be positive");
  return i64_mod(g.c, n) == 0;
}

bool is_gamma1(const SL2Matrix& g, std::int64_t n) {
  return is_gamma0(g, n) && i64_mod(g.a - 1, n) == 0 && i64_mod(g.d - 1, n) == 0;
}

SL2Matrix complete_column(std::int64_t a, std::int64_t c) {
  if (i64_gcd(a, c) != 1) throw CoprimalityError("complete_column: gcd(a, c) != 1");
  if (c == 0) return SL2Matrix(a, 0, 0, a);  // a = +-1
  std::int64_t ac = c < 0 ? -c : c;
  std::int64_t d = inv_mod(a, ac);  // 0 <= d < |c|, so a*d - 1 is divisible by c
  __int128 bnum = static_cast<__int128>(a) * d - 1;
  std::int64_t b = checked_i64(bnum / c, "complete_column overflow");
  return SL2Matrix(a, b, c, d);
}

SL2Matrix dual_gamma(const SL2Matrix& g, std::int64_t q1q2) {
  if (g.c <= 0) throw InvalidArgumentError("dual_gamma: c >= 1 required");
  if (g.c % q1q2 != 0) throw DivisibilityError("dual_gamma: q1*q2 must divide c");
  std::int64_t r = g.c / q1q2;
  return SL2Matrix(g.d, -r, checked_mul(-g.b, q1q2), g.a);
}

CyclotomicNumber psi(const SL2Matrix& g, const CharacterPair& pair) {
  if (!is_gamma0(g, pair.level()))
    throw MembershipError("psi: matrix not in Gamma_0(q1*q2)");
  std::int64_t e1 = pair.chi1bar_exponent(g.d);  // chi1(d) = conj of chi1bar(d)
  std::int64_t e2 = pair.chi2bar_exponent(g.d);
  if (e1 < 0 || e2 < 0) throw Error("psi: d not a unit");  // impossible in Gamma_0
  return CyclotomicNumber::root_of_unity(e2 - e1, pair.m());
}

SL2Matrix reduce_generator(const SL2Matrix& g) {
  if (g.c == 0) return g;
  std::int64_t ac = g.c < 0 ? -g.c : g.c;
  std::int64_t a0 = i64_mod(g.a, ac);
  if (2 * a0 > ac) a0 -= ac;  // balanced residue, |a0| <= |c|/2
  std::int64_t k = (a0 - g.a) / g.c;
  return SL2Matrix(checked_add(g.a, checked_mul(k, g.c)), checked_add(g.b, checked_mul(k, g.d)),
                   g.c, g.d);
}

std::vector<STLetter> st_word(const SL2Matrix& g) {
  std::vector<STLetter> word;
  SL2Matrix m = g;
  // Left-multiply by T^{-n} and S^{-1} until c = 0, recording inverses.
  while (m.c != 0) {
    // nearest integer to a/c, so the reduced |a| <= |c|/2
    std::int64_t n = i64_floor_div(checked_add(checked_mul(2, m.a), m.c), 2 * m.c);
    if (n != 0) {
      m = SL2Matrix::T_pow(-n) * m;
      word.push_back({'T', n});
    }
    // S^{-1} * m swaps rows: (a,b;c,d) -> (c,d;-a,-b)
    m = SL2Matrix::S().inverse() * m;
    word.push_back({'S', 1});
  }
  if (m.a == -1) {
    word.push_back({'S', 2});
    m = -m;
  }
  if (m.b != 0) {
    word.push_back({'T', m.b});
    m = SL2Matrix::T_pow(-m.b) * m;
  }
  if (!m.is_identity()) throw Error("st_word: reduction failed");
  return word;
}

CosetTable::CosetTable(std::int64_t n) : n_(n) {
  if (n < 3) throw InvalidArgumentError("CosetTable: N >= 3 required");
  if (n > 4096) throw InvalidArgumentError("CosetTable: level too large (N <= 4096)");
  index_map_.assign(n * n, -1);
  auto key = [n](std::int64_t c, std::int64_t d) { return c * n + d; };

  auto add = [&](std::int64_t c, std::int64_t d) {
    labels_.emplace_back(c, d);
    index_map_[key(c, d)] = static_cast<std::int64_t>(labels_.size()) - 1;
    return static_cast<std::int64_t>(labels_.size()) - 1;
  };

  std::int64_t root = add(0, 1);
  parent_.push_back(-1);
  parent_gen_.push_back(0);
  trans_s_.push_back(-1);
  trans_t_.push_back(-1);

  std::deque<std::int64_t> queue{root};
  while (!queue.empty()) {
    std::int64_t i = queue.front();
    queue.pop_front();
    auto [c, d] = labels_[i];
    // right multiplication: (c, d) S = (d, -c), (c, d) T = (c, c + d)
    const std::pair<std::int64_t, std::int64_t> next_s{d, i64_mod(-c, n_)};
    const std::pair<std::int64_t, std::int64_t> next_t{c, i64_mod(c + d, n_)};
    for (int which = 0; which < 2; ++which) {
      auto [nc, nd] = which == 0 ? next_s : next_t;
      std::int64_t j = index_map_[key(nc, nd)];
      if (j < 0) {
        j = add(nc, nd);
        parent_.push_back(i);
        parent_gen_.push_back(which == 0 ? 'S' : 'T');
        trans_s_.push_back(-1);
        trans_t_.push_back(-1);
        queue.push_back(j);
      }
      (which == 0 ? trans_s_ : trans_t_)[i] = j;
    }
  }
}

std::int64_t CosetTable::index_of(std::int64_t c, std::int64_t d) const {
  std::int64_t cc = i64_mod(c, n_), dd = i64_mod(d, n_);
  std::int64_t i = index_map_[cc * n_ + dd];
  if (i < 0) throw InvalidArgumentError("CosetTable: (c, d) not unimodular mod N");
  return i;
}

std::int64_t CosetTable::step(std::int64_t i, char gen, std::int64_t pow) const {
  const std::vector<std::int64_t>& fwd = (gen == 'S') ? trans_s_ : trans_t_;
  std::int64_t order = (gen == 'S') ? 4 : n_;
  std::int64_t p = i64_mod(pow, order);
  for (std::int64_t k = 0; k < p; ++k) i = fwd[i];
  return i;
}

SL2Matrix CosetTable::tree_representative(std::int64_t i) const {
  std::vector<char> path;
  for (std::int64_t v = i; parent_[v] >= 0; v = parent_[v]) path.push_back(parent_gen_[v]);
  SL2Matrix rep;
  for (auto it = path.rbegin(); it != path.rend(); ++it)
    rep = rep * (*it == 'S' ? SL2Matrix::S() : SL2Matrix::T());
  return rep;
}

SL2Matrix CosetTable::small_representative(std::int64_t i) const {
  auto [cbar, dbar] = labels_[i];
  auto balanced = [this](std::int64_t x) {
    std::int64_t r = i64_mod(x, n_);
    return 2 * r > n_ ? r - n_ : r;
  };
  std::int64_t c0 = balanced(cbar);
  // Try small lifts of c; for each, nudge d by multiples of N until coprime.
  for (std::int64_t ctry : {c0, c0 + n_, c0 - n_, c0 + 2 * n_, c0 - 2 * n_}) {
    std::int64_t d0 = balanced(dbar);
    for (std::int64_t t = 0; t <= 4; ++t) {
      for (std::int64_t dtry : {d0 + t * n_, d0 - t * n_}) {
        if (ctry == 0 && (dtry != 1 && dtry != -1)) continue;
        if (i64_gcd(ctry, dtry) != 1) continue;
        if (ctry == 0) return SL2Matrix(dtry, 0, 0, dtry);  // +-I up to T-power; row (0, +-1)
        std::int64_t ac = ctry < 0 ? -ctry : ctry;
        std::int64_t a = inv_mod(dtry, ac);
        if (2 * a > ac) a -= ac;  // balanced |a| <= |c|/2
        __int128 bnum = static_cast<__int128>(a) * dtry - 1;
        if (bnum % ctry != 0) continue;
        SL2Matrix rep(a, checked_i64(bnum / ctry, "small_representative overflow"), ctry, dtry);
        return rep;
      }
    }
  }
  throw Error("small_representative: no coprime lift found");
}

SL2Matrix CosetTable::representative(std::int64_t i, Transversal kind) const {
  return kind == Transversal::kSmallLift ? small_representative(i) : tree_representative(i);
}

std::vector<SL2Matrix> schreier_generators(const CosetTable& table, Transversal kind) {
  std::vector<SL2Matrix> reps(table.size());
  for (std::int64_t i = 0; i < table.size(); ++i) reps[i] = table.representative(i, kind);
  std::vector<SL2Matrix> gens;
  for (std::int64_t i = 0; i < table.size(); ++i) {
    for (int which = 0; which < 2; ++which) {
      SL2Matrix g = which == 0 ? SL2Matrix::S() : SL2Matrix::T();
      std::int64_t j = which == 0 ? table.step_s(i) : table.step_t(i);
      SL2Matrix sigma = reps[i] * g * reps[j].inverse();
      if (sigma.is_identity()) continue;
      if (!is_gamma1(sigma, table.level()))
        throw Error("schreier_generators: generator escaped Gamma_1");
      gens.push_back(sigma);
    }
  }
  return gens;
}

std::vector<SL2Matrix> schreier_generators(std::int64_t n, Transversal kind) {
  CosetTable table(n);
  return schreier_generators(table, kind);
}

std::string generators_json(const std::vector<SL2Matrix>& gens) {
  std::string out = "[";
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ",";
    out += "\"" + gens[i].str() + "\"";
  }
  return out + "]";
}

SL2Matrix random_gamma0(std::int64_t n, std::int64_t rmax, Rng& rng) {
  std::int64_t r = rng.range(1, rmax);
  std::int64_t c = checked_mul(r, n);
  for (;;) {
    std::int64_t a = rng.range(1, c);
    if (i64_gcd(a, c) != 1) continue;
    return complete_column(a, c);
  }
}

SL2Matrix random_gamma1(std::int64_t n, std::int64_t rmax, Rng& rng) {
  std::int64_t r = rng.range(1, rmax);
  std::int64_t c = checked_mul(r, n);
  for (;;) {
    std::int64_t a = 1 + n * rng.range(0, c / n - 1);
    if (i64_gcd(a, c) != 1) continue;
    SL2Matrix g = complete_column(a, c);
    if (!is_gamma1(g, n)) throw Error("random_gamma1: completion escaped Gamma_1");
    return g;
  }
}

}  // namespace dedesum
