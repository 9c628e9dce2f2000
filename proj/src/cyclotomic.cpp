#include "dedesum/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "dedesum/numtheory.hpp"

namespace dedesum {

namespace {

// Exact division of integer polynomials; divisor monic. Remainder must
// vanish.
std::vector<Int> exact_div(const std::vector<Int>& num, const std::vector<Int>& den) {
  std::vector<Int> rem = num;
  std::int64_t dn = static_cast<std::int64_t>(num.size()) - 1;
  std::int64_t dd = static_cast<std::int64_t>(den.size()) - 1;
  std::vector<Int> quot(dn - dd + 1, Int(0));
  for (std::int64_t k = dn - dd; k >= 0; --k) {
    Int q = rem[k + dd];
    quot[k] = q;
    if (q == 0) continue;
    for (std::int64_t i = 0; i <= dd; ++i) rem[k + i] -= q * den[i];
  }
  for (const Int& r : rem)
    if (r != 0) throw Error("exact_div: nonzero remainder");
  return quot;
}

struct FieldTable {
  std::int64_t m = 1;
  std::int64_t phi = 1;
  CyclotomicPolynomial poly;
  // reduction[k - phi] holds the coefficients of x^k mod Phi_m for
  // k in [phi, max(2*phi - 2, m - 1)].
  std::vector<std::vector<Int>> reduction;
};

const FieldTable& field_table(std::int64_t m) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<FieldTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;

  auto ft = std::make_unique<FieldTable>();
  ft->m = m;
  ft->poly = cyclotomic_polynomial(m);
  ft->phi = ft->poly.degree();
  std::int64_t phi = ft->phi;
  std::int64_t top = std::max(2 * phi - 2, m - 1);
  if (top >= phi) {
    // x^phi = -(a_0 + a_1 x + ... + a_{phi-1} x^{phi-1}) for monic Phi_m.
    std::vector<Int> row(phi);
    for (std::int64_t i = 0; i < phi; ++i) row[i] = -ft->poly.coeffs[i];
    ft->reduction.push_back(row);
    for (std::int64_t k = phi + 1; k <= top; ++k) {
      const std::vector<Int>& prev = ft->reduction.back();
      std::vector<Int> next(phi, Int(0));
      Int carry = prev[phi - 1];
      for (std::int64_t i = phi - 1; i >= 1; --i) next[i] = prev[i - 1];
      if (carry != 0)
        for (std::int64_t i = 0; i < phi; ++i) next[i] += carry * ft->reduction[0][i];
      ft->reduction.push_back(std::move(next));
    }
  }
  const FieldTable& ref = *ft;
  cache.emplace(m, std::move(ft));
  return ref;
}

// Reduce a raw power-coefficient vector (any length) into the basis.
std::vector<Rat> reduce_raw(std::int64_t m, const std::vector<Rat>& raw) {
  const FieldTable& ft = field_table(m);
  std::vector<Rat> out(ft.phi, Rat(0));
  for (std::int64_t e = 0; e < static_cast<std::int64_t>(raw.size()); ++e) {
    const Rat& c = raw[e];
    if (c == 0) continue;
    if (e < ft.phi) {
      out[e] += c;
    } else {
      const std::vector<Int>& row = ft.reduction.at(e - ft.phi);
      for (std::int64_t i = 0; i < ft.phi; ++i)
        if (row[i] != 0) out[i] += c * Rat(row[i]);
    }
  }
  return out;
}

}  // namespace

const CyclotomicPolynomial& cyclotomic_polynomial(std::int64_t m) {
  static std::mutex mu;
  static std::map<std::int64_t, CyclotomicPolynomial> cache;
  if (m < 1) throw InvalidArgumentError("cyclotomic_polynomial: m must be positive");
  std::lock_guard<std::mutex> lock(mu);
  auto compute = [](auto&& self, std::int64_t n) -> const CyclotomicPolynomial& {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<Int> p(n + 1, Int(0));
    p[0] = -1;
    p[n] = 1;  // x^n - 1
    for (std::int64_t d : divisors(n)) {
      if (d == n) continue;
      p = exact_div(p, self(self, d).coeffs);
    }
    CyclotomicPolynomial cp;
    cp.index = n;
    cp.coeffs = std::move(p);
    return cache.emplace(n, std::move(cp)).first->second;
  };
  return compute(compute, m);
}

CyclotomicNumber CyclotomicNumber::zero(std::int64_t m) {
  const FieldTable& ft = field_table(m);
  return CyclotomicNumber(m, std::vector<Rat>(ft.phi, Rat(0)));
}

CyclotomicNumber CyclotomicNumber::one(std::int64_t m) { return from_rat(m, Rat(1)); }

CyclotomicNumber CyclotomicNumber::from_rat(std::int64_t m, const Rat& value) {
  CyclotomicNumber x = zero(m);
  x.c_[0] = value;
  return x;
}

CyclotomicNumber CyclotomicNumber::root_of_unity(std::int64_t k, std::int64_t m) {
  if (m < 1) throw InvalidArgumentError("root_of_unity: m must be positive");
  const FieldTable& ft = field_table(m);
  std::int64_t e = i64_mod(k, m);
  CyclotomicNumber x = zero(m);
  if (e < ft.phi) {
    x.c_[e] = 1;
  } else {
    const std::vector<Int>& row = ft.reduction.at(e - ft.phi);
    for (std::int64_t i = 0; i < ft.phi; ++i) x.c_[i] = Rat(row[i]);
  }
  return x;
}

CyclotomicNumber CyclotomicNumber::from_power_coeffs(std::int64_t m, const std::vector<Rat>& raw) {
  return CyclotomicNumber(m, reduce_raw(m, raw));
}

bool CyclotomicNumber::is_zero() const {
  for (const Rat& c : c_)
    if (c != 0) return false;
  return true;
}

bool CyclotomicNumber::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat CyclotomicNumber::rational_value() const {
  if (!is_rational()) throw InvalidArgumentError("rational_value: element is not rational");
  return c_[0];
}

bool CyclotomicNumber::is_integral() const {
  for (const Rat& c : c_)
    if (!is_integer(c)) return false;
  return true;
}

Int CyclotomicNumber::denominator() const {
  Int d(1);
  for (const Rat& c : c_) d = int_lcm(d, rat_den(c));
  return d;
}

CyclotomicNumber CyclotomicNumber::operator-() const {
  std::vector<Rat> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
  return CyclotomicNumber(m_, std::move(c));
}

CyclotomicNumber CyclotomicNumber::operator+(const CyclotomicNumber& o) const {
  if (m_ != o.m_) throw ModulusMismatchError("cyclotomic add: modulus mismatch");
  std::vector<Rat> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] + o.c_[i];
  return CyclotomicNumber(m_, std::move(c));
}

CyclotomicNumber& CyclotomicNumber::operator+=(const CyclotomicNumber& o) {
  if (m_ != o.m_) throw ModulusMismatchError("cyclotomic add: modulus mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CyclotomicNumber CyclotomicNumber::operator-(const CyclotomicNumber& o) const {
  if (m_ != o.m_) throw ModulusMismatchError("cyclotomic sub: modulus mismatch");
  std::vector<Rat> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] - o.c_[i];
  return CyclotomicNumber(m_, std::move(c));
}

CyclotomicNumber CyclotomicNumber::operator*(const CyclotomicNumber& o) const {
  if (m_ != o.m_) throw ModulusMismatchError("cyclotomic mul: modulus mismatch");
  std::int64_t phi = static_cast<std::int64_t>(c_.size());
  std::vector<Rat> prod(2 * phi - 1, Rat(0));
  for (std::int64_t i = 0; i < phi; ++i) {
    if (c_[i] == 0) continue;
    for (std::int64_t j = 0; j < phi; ++j) {
      if (o.c_[j] == 0) continue;
      prod[i + j] += c_[i] * o.c_[j];
    }
  }
  return CyclotomicNumber(m_, reduce_raw(m_, prod));
}

CyclotomicNumber CyclotomicNumber::operator*(const Rat& s) const {
  std::vector<Rat> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * s;
  return CyclotomicNumber(m_, std::move(c));
}

CyclotomicNumber CyclotomicNumber::operator/(const Rat& s) const {
  if (s == 0) throw InvalidArgumentError("cyclotomic division by zero scalar");
  std::vector<Rat> c(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] / s;
  return CyclotomicNumber(m_, std::move(c));
}

CyclotomicNumber CyclotomicNumber::inverse() const {
  if (is_zero()) throw InvalidArgumentError("cyclotomic inverse of zero");
  if (is_rational()) return from_rat(m_, Rat(1) / c_[0]);
  // Extended Euclid in Q[x]: u * this + v * Phi_m = gcd = const.
  const FieldTable& ft = field_table(m_);
  using Poly = std::vector<Rat>;
  auto deg = [](const Poly& p) {
    for (std::int64_t i = static_cast<std::int64_t>(p.size()) - 1; i >= 0; --i)
      if (p[i] != 0) return i;
    return static_cast<std::int64_t>(-1);
  };
  Poly r0(ft.poly.coeffs.size());
  for (size_t i = 0; i < r0.size(); ++i) r0[i] = Rat(ft.poly.coeffs[i]);
  Poly r1 = c_;
  Poly s0{Rat(0)}, s1{Rat(1)};  // coefficients of `this`
  while (deg(r1) > 0) {
    std::int64_t d0 = deg(r0), d1 = deg(r1);
    Poly q(d0 - d1 + 1, Rat(0));
    Poly rem = r0;
    for (std::int64_t k = d0 - d1; k >= 0; --k) {
      Rat f = rem[k + d1] / r1[d1];
      q[k] = f;
      if (f == 0) continue;
      for (std::int64_t i = 0; i <= d1; ++i) rem[k + i] -= f * r1[i];
    }
    // s_next = s0 - q * s1
    Poly snext(std::max(s0.size(), q.size() + s1.size()), Rat(0));
    for (size_t i = 0; i < s0.size(); ++i) snext[i] = s0[i];
    for (size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (size_t j = 0; j < s1.size(); ++j) snext[i + j] -= q[i] * s1[j];
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(snext);
  }
  std::int64_t d1 = deg(r1);
  if (d1 != 0) throw Error("cyclotomic inverse: unexpected gcd degree");
  Rat unit = r1[0];
  std::vector<Rat> raw(s1.size());
  for (size_t i = 0; i < s1.size(); ++i) raw[i] = s1[i] / unit;
  return CyclotomicNumber(m_, reduce_raw(m_, raw));
}

CyclotomicNumber CyclotomicNumber::conjugate() const {
  std::vector<Rat> raw(m_, Rat(0));
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(c_.size()); ++i)
    raw[i64_mod(-i, m_)] += c_[i];
  return CyclotomicNumber(m_, reduce_raw(m_, raw));
}

CyclotomicNumber CyclotomicNumber::lift(std::int64_t m_prime) const {
  if (m_prime < 1 || m_prime % m_ != 0)
    throw DivisibilityError("lift: target modulus not a multiple of source");
  if (m_prime == m_) return *this;
  std::int64_t k = m_prime / m_;
  std::vector<Rat> raw(m_prime, Rat(0));
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(c_.size()); ++i)
    raw[i * k] += c_[i];
  return CyclotomicNumber(m_prime, reduce_raw(m_prime, raw));
}

bool CyclotomicNumber::operator==(const CyclotomicNumber& o) const {
  if (m_ != o.m_) throw ModulusMismatchError("cyclotomic compare: modulus mismatch");
  return c_ == o.c_;
}

std::string CyclotomicNumber::str() const {
  std::ostringstream out;
  out << m_ << ":[";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) out << ",";
    out << rat_str(c_[i]);
  }
  out << "]";
  return out.str();
}

CyclotomicNumber CyclotomicNumber::parse(std::string_view text) {
  size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw InvalidArgumentError("cyclotomic parse: missing ':'");
  std::int64_t m = 0;
  try {
    m = std::stoll(std::string(text.substr(0, colon)));
  } catch (const std::exception&) {
    throw InvalidArgumentError("cyclotomic parse: bad modulus");
  }
  std::string_view rest = text.substr(colon + 1);
  if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
    throw InvalidArgumentError("cyclotomic parse: expected [..]");
  rest = rest.substr(1, rest.size() - 2);
  std::vector<Rat> coeffs;
  size_t pos = 0;
  while (pos <= rest.size() && !rest.empty()) {
    size_t comma = rest.find(',', pos);
    std::string_view tok = rest.substr(pos, comma == std::string_view::npos ? rest.size() - pos : comma - pos);
    coeffs.push_back(parse_rat(tok));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  const FieldTable& ft = field_table(m);
  if (static_cast<std::int64_t>(coeffs.size()) != ft.phi)
    throw InvalidArgumentError("cyclotomic parse: wrong coefficient count");
  return CyclotomicNumber(m, std::move(coeffs));
}

std::complex<double> CyclotomicNumber::to_complex() const {
  double angle = 2.0 * std::numbers::pi / static_cast<double>(m_);
  std::complex<double> zeta(std::cos(angle), std::sin(angle));
  std::complex<double> acc(0.0, 0.0);
  for (std::int64_t i = static_cast<std::int64_t>(c_.size()) - 1; i >= 0; --i)
    acc = acc * zeta + std::complex<double>(c_[i].get_d(), 0.0);
  return acc;
}

}  // namespace dedesum
