#include "dedesum/characters.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace dedesum {

namespace {

// Walks every unit of (Z/q)^* as (unit, exponent tuple) in odometer
// order over the canonical generators.
template <typename F>
void for_each_unit(const UnitGroupStructure& ug, F&& visit) {
  std::int64_t q = ug.modulus;
  size_t k = ug.generators.size();
  std::vector<std::int64_t> tuple(k, 0);
  std::int64_t u = i64_mod(1, q);
  for (;;) {
    visit(u, tuple);
    size_t i = 0;
    for (; i < k; ++i) {
      u = static_cast<std::int64_t>(static_cast<__int128>(u) * ug.generators[i] % q);
      if (++tuple[i] < ug.orders[i]) break;
      tuple[i] = 0;  // g_i^{o_i} = 1, so u already wrapped with it
    }
    if (i == k) return;
  }
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / i64_gcd(a, b) * b; }

}  // namespace

DirichletCharacter::DirichletCharacter(std::int64_t q, std::vector<std::int64_t> exponents)
    : q_(q), exps_(std::move(exponents)) {
  if (q < 1) throw InvalidArgumentError("character modulus must be positive");
  UnitGroupStructure ug = unit_group(q);
  if (exps_.size() != ug.orders.size())
    throw InvalidArgumentError("character exponent vector has wrong length");
  for (size_t i = 0; i < exps_.size(); ++i) exps_[i] = i64_mod(exps_[i], ug.orders[i]);

  order_ = 1;
  for (size_t i = 0; i < exps_.size(); ++i)
    order_ = lcm64(order_, ug.orders[i] / i64_gcd(ug.orders[i], exps_[i]));

  vexp_.assign(q_, -1);
  for_each_unit(ug, [&](std::int64_t u, const std::vector<std::int64_t>& tuple) {
    std::int64_t e = 0;
    for (size_t i = 0; i < tuple.size(); ++i) {
      // chi(g_i) = zeta_{o_i}^{e_i} = zeta_order^{e_i * order / o_i}
      e = i64_mod(e + tuple[i] * (exps_[i] * order_ / ug.orders[i]), order_);
    }
    vexp_[u] = static_cast<std::int32_t>(e);
  });

  parity_ = (q_ <= 2 || vexp_[q_ - 1] == 0) ? 1 : -1;

  // Conductor: smallest f | q with chi trivial on units n = 1 (mod f).
  conductor_ = q_;
  for (std::int64_t f : divisors(q_)) {
    bool factors = true;
    for (std::int64_t n = 1; n < q_ && factors; n += f)
      if (vexp_[n] > 0) factors = false;
    if (factors) {
      conductor_ = f;
      break;
    }
  }
  primitive_ = (conductor_ == q_);
}

CyclotomicNumber DirichletCharacter::evaluate(std::int64_t n) const {
  std::int64_t e = value_exponent(n);
  if (e < 0) return CyclotomicNumber::zero(order_);
  return CyclotomicNumber::root_of_unity(e, order_);
}

DirichletCharacter DirichletCharacter::conjugated() const {
  UnitGroupStructure ug = unit_group(q_);
  std::vector<std::int64_t> neg(exps_.size());
  for (size_t i = 0; i < exps_.size(); ++i) neg[i] = i64_mod(-exps_[i], ug.orders[i]);
  return DirichletCharacter(q_, std::move(neg));
}

DirichletCharacter DirichletCharacter::primitive_part() const {
  if (primitive_) return *this;
  std::int64_t f = conductor_;
  UnitGroupStructure ugf = unit_group(f);
  std::vector<std::int64_t> exps(ugf.generators.size());
  for (size_t i = 0; i < ugf.generators.size(); ++i) {
    // Lift the generator to a unit mod q in the same residue class mod f.
    std::int64_t n = ugf.generators[i];
    while (i64_gcd(n, q_) != 1) n += f;
    std::int64_t v = vexp_[i64_mod(n, q_)];
    // zeta_order^v must be an o_i-th root of unity here.
    std::int64_t oi = ugf.orders[i];
    if ((v * oi) % order_ != 0)
      throw Error("primitive_part: value not an o_i-th root of unity");
    exps[i] = i64_mod(v * oi / order_, oi);
  }
  return DirichletCharacter(f, std::move(exps));
}

std::string DirichletCharacter::label() const {
  return std::to_string(q_) + "." + std::to_string(conrey_index(*this));
}

std::string DirichletCharacter::exponent_label() const {
  std::ostringstream out;
  out << q_ << ":[";
  for (size_t i = 0; i < exps_.size(); ++i) {
    if (i) out << ",";
    out << exps_[i];
  }
  out << "]";
  return out.str();
}

std::vector<DirichletCharacter> enumerate_all(std::int64_t q) {
  UnitGroupStructure ug = unit_group(q);
  std::vector<DirichletCharacter> chars;
  std::vector<std::int64_t> exps(ug.orders.size(), 0);
  for (;;) {
    chars.emplace_back(q, exps);
    // lexicographic odometer, most significant digit first
    std::int64_t i = static_cast<std::int64_t>(exps.size()) - 1;
    for (; i >= 0; --i) {
      if (++exps[i] < ug.orders[i]) break;
      exps[i] = 0;
    }
    if (i < 0) break;
  }
  return chars;
}

std::vector<DirichletCharacter> enumerate_primitive(std::int64_t q) {
  if (q < 3) throw InvalidArgumentError("enumerate_primitive: q >= 3 required");
  std::vector<DirichletCharacter> out;
  for (auto& chi : enumerate_all(q))
    if (chi.is_primitive()) out.push_back(std::move(chi));
  return out;
}

// ---- Conrey labels ----

namespace {

struct ConreyFactor {
  std::int64_t pe;        // p^k
  std::int64_t phi;       // phi(p^k)
  std::int64_t g;         // generator for odd p (0 for p = 2)
  int k;                  // exponent of 2 when p = 2, else 0
};

struct ConreyData {
  std::int64_t q;
  std::vector<ConreyFactor> factors;
  std::int64_t exponent_lcm = 1;  // lcm of pairing denominators
};

// Discrete log of n in <g> mod pe (brute force; moduli are small).
std::int64_t dlog(std::int64_t n, std::int64_t g, std::int64_t pe, std::int64_t ord) {
  std::int64_t x = 1;
  for (std::int64_t a = 0; a < ord; ++a) {
    if (x == n) return a;
    x = static_cast<std::int64_t>(static_cast<__int128>(x) * g % pe);
  }
  throw Error("conrey dlog: not in cyclic subgroup");
}

// (a0, a1) with n = (-1)^{a0} 5^{a1} mod 2^k, k >= 3.
std::pair<std::int64_t, std::int64_t> two_power_log(std::int64_t n, std::int64_t pe) {
  std::int64_t half = pe / 4;  // order of 5
  std::int64_t x = 1;
  for (std::int64_t a1 = 0; a1 < half; ++a1) {
    if (x == n) return {0, a1};
    if (pe - x == n) return {1, a1};
    x = static_cast<std::int64_t>(static_cast<__int128>(x) * 5 % pe);
  }
  throw Error("conrey two_power_log: unit not found");
}

const ConreyData& conrey_data(std::int64_t q) {
  static std::mutex mu;
  static std::map<std::int64_t, ConreyData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  ConreyData cd;
  cd.q = q;
  for (auto [p, e] : factorize(q).primes) {
    ConreyFactor f{};
    f.pe = 1;
    for (int i = 0; i < e; ++i) f.pe *= p;
    f.phi = euler_phi(f.pe);
    if (p == 2) {
      f.g = 0;
      f.k = e;
      if (e == 2) cd.exponent_lcm = lcm64(cd.exponent_lcm, 2);
      if (e >= 3) cd.exponent_lcm = lcm64(cd.exponent_lcm, std::max<std::int64_t>(2, f.pe / 4));
    } else {
      f.g = primitive_root(f.pe);
      f.k = 0;
      cd.exponent_lcm = lcm64(cd.exponent_lcm, f.phi);
    }
    cd.factors.push_back(f);
  }
  return cache.emplace(q, std::move(cd)).first->second;
}

// Pairing exponent E/D with chi_q(n, x) = e(E/D), D = exponent_lcm.
std::int64_t conrey_pairing(const ConreyData& cd, std::int64_t n, std::int64_t x) {
  std::int64_t D = cd.exponent_lcm;
  std::int64_t total = 0;
  for (const auto& f : cd.factors) {
    std::int64_t np = i64_mod(n, f.pe), xp = i64_mod(x, f.pe);
    if (f.k == 1) continue;  // (Z/2)^* trivial
    if (f.k == 0) {
      std::int64_t a = dlog(np, f.g, f.pe, f.phi);
      std::int64_t b = dlog(xp, f.g, f.pe, f.phi);
      total = i64_mod(total + (static_cast<__int128>(a) * b % f.phi) * (D / f.phi), D);
    } else if (f.k == 2) {
      std::int64_t a = (np == 3) ? 1 : 0;
      std::int64_t b = (xp == 3) ? 1 : 0;
      total = i64_mod(total + a * b * (D / 2), D);
    } else {
      auto [a0, a1] = two_power_log(np, f.pe);
      auto [b0, b1] = two_power_log(xp, f.pe);
      std::int64_t half = f.pe / 4;
      total = i64_mod(total + a0 * b0 * (D / 2), D);
      total = i64_mod(total + (static_cast<__int128>(a1) * b1 % half) * (D / half), D);
    }
  }
  return total;
}

std::vector<std::int64_t> conrey_exponents(std::int64_t q, std::int64_t n) {
  const ConreyData& cd = conrey_data(q);
  UnitGroupStructure ug = unit_group(q);
  std::int64_t D = cd.exponent_lcm;
  std::vector<std::int64_t> exps(ug.generators.size());
  for (size_t i = 0; i < ug.generators.size(); ++i) {
    std::int64_t E = conrey_pairing(cd, n, ug.generators[i]);
    std::int64_t oi = ug.orders[i];
    if ((E * oi) % D != 0) throw Error("conrey_exponents: pairing value has wrong order");
    exps[i] = i64_mod(E * oi / D, oi);
  }
  return exps;
}

}  // namespace

DirichletCharacter conrey_character(std::int64_t q, std::int64_t n) {
  if (q < 1) throw InvalidArgumentError("conrey_character: q must be positive");
  if (i64_gcd(i64_mod(n, std::max<std::int64_t>(q, 1)), q) != 1 && q > 1)
    throw CoprimalityError("conrey_character: index not coprime to modulus");
  if (q == 1) return DirichletCharacter(1, {});
  return DirichletCharacter(q, conrey_exponents(q, i64_mod(n, q)));
}

std::int64_t conrey_index(const DirichletCharacter& chi) {
  std::int64_t q = chi.modulus();
  if (q == 1) return 1;
  for (std::int64_t n = 1; n < q; ++n) {
    if (i64_gcd(n, q) != 1) continue;
    if (conrey_exponents(q, n) == chi.exponents()) return n;
  }
  throw Error("conrey_index: no index matched");  // unreachable: pairing is perfect
}

DirichletCharacter parse_character(std::string_view label) {
  size_t colon = label.find(':');
  if (colon != std::string_view::npos) {
    std::int64_t q = 0;
    try {
      q = std::stoll(std::string(label.substr(0, colon)));
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad character label: " + std::string(label));
    }
    std::string_view rest = label.substr(colon + 1);
    if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
      throw InvalidArgumentError("bad exponent list in character label");
    rest = rest.substr(1, rest.size() - 2);
    std::vector<std::int64_t> exps;
    std::string tok;
    std::istringstream in{std::string(rest)};
    while (std::getline(in, tok, ',')) {
      try {
        exps.push_back(std::stoll(tok));
      } catch (const std::exception&) {
        throw InvalidArgumentError("bad exponent in character label");
      }
    }
    return DirichletCharacter(q, std::move(exps));
  }
  size_t dot = label.find('.');
  if (dot == std::string_view::npos)
    throw InvalidArgumentError("character label must be 'q.n' or 'q:[e,...]': " + std::string(label));
  try {
    std::string qs(label.substr(0, dot)), ns(label.substr(dot + 1));
    size_t qpos = 0, npos = 0;
    std::int64_t q = std::stoll(qs, &qpos);
    std::int64_t n = std::stoll(ns, &npos);
    if (qpos != qs.size() || npos != ns.size())
      throw InvalidArgumentError("bad character label: " + std::string(label));
    return conrey_character(q, n);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidArgumentError("bad character label: " + std::string(label));
  }
}

CyclotomicNumber gauss_sum(const DirichletCharacter& chi) {
  if (!chi.is_primitive())
    throw PrimitivityError("gauss_sum: character must be primitive");
  std::int64_t q = chi.modulus();
  std::int64_t d = chi.order();
  std::int64_t M = lcm64(d, q);
  std::vector<Rat> raw(M, Rat(0));
  for (std::int64_t n = 0; n < q; ++n) {
    std::int64_t v = chi.value_exponent(n);
    if (v < 0) continue;
    std::int64_t e = i64_mod(v * (M / d) + n * (M / q), M);
    raw[e] += 1;
  }
  return CyclotomicNumber::from_power_coeffs(M, raw);
}

CyclotomicNumber bernoulli_b1(const DirichletCharacter& chi) {
  if (chi.is_trivial())
    throw PrimitivityError("bernoulli_b1: character must be nontrivial");
  std::int64_t q = chi.modulus();
  std::int64_t d = chi.order();
  std::vector<Rat> raw(d, Rat(0));
  for (std::int64_t a = 0; a < q; ++a) {
    std::int64_t v = chi.value_exponent(a);
    if (v < 0) continue;
    raw[v] += Rat(static_cast<long>(a));
  }
  return CyclotomicNumber::from_power_coeffs(d, raw) / Rat(static_cast<long>(q));
}

CharacterPair::CharacterPair(DirichletCharacter chi1, DirichletCharacter chi2)
    : chi1_(std::move(chi1)), chi2_(std::move(chi2)) {
  if (chi1_.is_trivial() || chi2_.is_trivial())
    throw PrimitivityError("character pair: both characters must be nontrivial");
  if (!chi1_.is_primitive() || !chi2_.is_primitive())
    throw PrimitivityError("character pair: both characters must be primitive");
  if (chi1_.parity() * chi2_.parity() != 1)
    throw ParityError("character pair: chi1*chi2(-1) = 1 required");
  m_ = lcm64(chi1_.order(), chi2_.order());
  std::int64_t d1 = chi1_.order(), d2 = chi2_.order();
  e1bar_.assign(q1(), -1);
  for (std::int64_t n = 0; n < q1(); ++n) {
    std::int64_t v = chi1_.value_exponent(n);
    if (v >= 0) e1bar_[n] = static_cast<std::int32_t>(i64_mod(-v * (m_ / d1), m_));
  }
  e2bar_.assign(q2(), -1);
  for (std::int64_t n = 0; n < q2(); ++n) {
    std::int64_t v = chi2_.value_exponent(n);
    if (v >= 0) e2bar_[n] = static_cast<std::int32_t>(i64_mod(-v * (m_ / d2), m_));
  }
}

CyclotomicNumber CharacterPair::chi1bar_value(std::int64_t n) const {
  std::int64_t e = chi1bar_exponent(n);
  if (e < 0) return CyclotomicNumber::zero(m_);
  return CyclotomicNumber::root_of_unity(e, m_);
}

CyclotomicNumber CharacterPair::chi2bar_value(std::int64_t n) const {
  std::int64_t e = chi2bar_exponent(n);
  if (e < 0) return CyclotomicNumber::zero(m_);
  return CyclotomicNumber::root_of_unity(e, m_);
}

std::vector<CharacterPair> valid_pairs(std::int64_t q1, std::int64_t q2) {
  std::vector<CharacterPair> pairs;
  if (q1 < 3 || q2 < 3) return pairs;
  auto list1 = enumerate_primitive(q1);
  auto list2 = enumerate_primitive(q2);
  for (const auto& c1 : list1) {
    if (c1.is_trivial()) continue;
    for (const auto& c2 : list2) {
      if (c2.is_trivial()) continue;
      if (c1.parity() * c2.parity() != 1) continue;
      pairs.emplace_back(c1, c2);
    }
  }
  return pairs;
}

}  // namespace dedesum
