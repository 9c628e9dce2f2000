#include "dedesum/dedekind.hpp"

#include <algorithm>

#include "dedesum/numtheory.hpp"

namespace dedesum {

namespace {

// Kernel range: the histogram rows accumulate sums of floor(j/q2) over
// j < c, bounded by c^2/(2 q2); c <= 2^32 keeps them inside int64 for
// every q2 >= 3 (the per-class A accumulators are 128-bit and hold
// their c^3/(3 q2) bound far beyond that).
constexpr std::int64_t kMaxKernelC = std::int64_t(1) << 32;
constexpr std::int64_t kMaxKernelQ1 = std::int64_t(1) << 20;

void check_sum_args(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  if (c < 1) throw InvalidArgumentError("dedekind sum: c >= 1 required");
  if (c % ctx.level() != 0)
    throw DivisibilityError("dedekind sum: q1*q2 must divide c");
  if (i64_gcd(a, c) != 1) throw CoprimalityError("dedekind sum: gcd(a, c) = 1 required");
}

}  // namespace

const char* formula_name(EvalFormula f) {
  switch (f) {
    case EvalFormula::kBernoulli: return "bernoulli";
    case EvalFormula::kFractional: return "fractional";
    case EvalFormula::kFloor: return "floor";
  }
  return "?";
}

DedekindContext::DedekindContext(CharacterPair pair, EvalPolicy policy)
    : pair_(std::move(pair)), policy_(policy) {
  std::int64_t q1 = pair_.q1();
  suffix1_.assign(q1 + 1, CyclotomicNumber::zero(pair_.m()));
  for (std::int64_t t = q1 - 1; t >= 0; --t)
    suffix1_[t] = suffix1_[t + 1] + pair_.chi1bar_value(t);
}

CyclotomicNumber eval_bernoulli(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  check_sum_args(ctx, a, c);
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2(), m = ctx.m();
  const auto& e1 = ctx.pair().chi1bar_table();
  const auto& e2 = ctx.pair().chi2bar_table();
  std::vector<Rat> acc(m, Rat(0));
  Int ai(static_cast<long>(a));
  for (std::int64_t j = 0; j < c; ++j) {
    std::int64_t ej = e2[j % q2];
    if (ej < 0) continue;
    Rat b1j = sawtooth(make_rat(j, c));
    if (b1j == 0) continue;
    Rat ajc = make_rat(ai * j, Int(static_cast<long>(c)));
    for (std::int64_t n = 0; n < q1; ++n) {
      std::int64_t en = e1[n];
      if (en < 0) continue;
      Rat b1x = sawtooth(make_rat(n, q1) + ajc);
      if (b1x == 0) continue;
      acc[(ej + en) % m] += b1j * b1x;
    }
  }
  return CyclotomicNumber::from_power_coeffs(m, acc);
}

CyclotomicNumber eval_fractional(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  check_sum_args(ctx, a, c);
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2(), m = ctx.m();
  const auto& e1 = ctx.pair().chi1bar_table();
  const auto& e2 = ctx.pair().chi2bar_table();
  std::vector<Rat> acc(m, Rat(0));
  Int ai(static_cast<long>(a));
  for (std::int64_t j = 0; j < c; ++j) {
    std::int64_t ej = e2[j % q2];
    if (ej < 0) continue;
    if (j == 0) continue;  // {j/c} = 0
    Rat fj = make_rat(j, c);
    Rat ajc = make_rat(ai * j, Int(static_cast<long>(c)));
    for (std::int64_t n = 0; n < q1; ++n) {
      std::int64_t en = e1[n];
      if (en < 0) continue;
      Rat fx = fractional(make_rat(n, q1) + ajc);
      if (fx == 0) continue;
      acc[(ej + en) % m] += fj * fx;
    }
  }
  return CyclotomicNumber::from_power_coeffs(m, acc);
}

CyclotomicNumber eval_floor_reference(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  check_sum_args(ctx, a, c);
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2(), m = ctx.m();
  std::int64_t r = c / ctx.level();
  const auto& e1 = ctx.pair().chi1bar_table();
  const auto& e2 = ctx.pair().chi2bar_table();
  std::vector<Rat> acc(m, Rat(0));
  Int ai(static_cast<long>(a));
  for (std::int64_t j = 0; j < c; ++j) {
    std::int64_t ej = e2[j % q2];
    if (ej < 0) continue;
    std::int64_t jq2 = j / q2;
    if (jq2 == 0) continue;
    Rat ajc = make_rat(ai * j, Int(static_cast<long>(c)));
    for (std::int64_t n = 0; n < q1; ++n) {
      std::int64_t en = e1[n];
      if (en < 0) continue;
      Int fl = rat_floor(make_rat(n, q1) + ajc);
      if (fl == 0) continue;
      acc[(ej + en) % m] += Rat(fl) * Rat(static_cast<long>(jq2));
    }
  }
  CyclotomicNumber total = CyclotomicNumber::from_power_coeffs(m, acc);
  return total / make_rat(-r * q1, 1);
}

CyclotomicNumber eval_floor_kernel(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  check_sum_args(ctx, a, c);
  if (c > kMaxKernelC || ctx.q1() > kMaxKernelQ1)
    throw InvalidArgumentError("eval_floor_kernel: arguments out of kernel range");
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2(), m = ctx.m();
  std::int64_t r = c / ctx.level();
  std::int64_t a0 = i64_mod(a, c);  // sum is invariant under a -> a mod c

  const std::int32_t* e2 = ctx.pair().chi2bar_table().data();

  // Split floor(a0 j / c + n / q1) = Q_j + [n >= t_j] with
  // u_j = a0 j mod c, Q_j = floor(a0 j / c), t_j = q1 - floor(u_j q1 / c).
  // Per zeta_m-exponent class of chi2bar(j), accumulate
  //   A[e]    = sum floor(j/q2) * Q_j
  //   B[e][t] = sum of floor(j/q2) over j with threshold t.
  std::vector<__int128> A(m, 0);
  std::vector<std::int64_t> B(static_cast<size_t>(m) * (q1 + 1), 0);

  const std::int64_t step_q = a0 * q1 / c;  // a0*q1 = step_q*c + step_r
  const std::int64_t step_r = a0 * q1 % c;
  std::int64_t u = 0, q_acc = 0, vmod = 0, vq = 0;
  std::int64_t jq2 = 0, cnt = 0;
  for (std::int64_t j = 0; j < c; ++j) {
    std::int64_t e = e2[cnt];
    if (e >= 0 && jq2 > 0) {
      A[e] += static_cast<__int128>(jq2) * q_acc;
      B[static_cast<size_t>(e) * (q1 + 1) + (q1 - vq)] += jq2;
    }
    // advance counters to j+1; invariants: u = a0*j mod c,
    // q_acc = floor(a0*j/c), vq*c + vmod = u*q1
    u += a0;
    vmod += step_r;
    vq += step_q;
    if (vmod >= c) {
      vmod -= c;
      ++vq;
    }
    if (u >= c) {
      u -= c;
      vq -= q1;
      ++q_acc;
    }
    if (++cnt == q2) {
      cnt = 0;
      ++jq2;
    }
  }

  std::vector<Rat> acoeff(m, Rat(0));
  for (std::int64_t e = 0; e < m; ++e) {
    if (A[e] == 0) continue;
    bool neg = A[e] < 0;
    unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-A[e])
                                : static_cast<unsigned __int128>(A[e]);
    Int v(0);
    Int base = Int(1);
    mpz_ui_pow_ui(base.get_mpz_t(), 2, 64);
    Int hi(static_cast<unsigned long>(mag >> 64));
    Int lo(static_cast<unsigned long>(mag & 0xffffffffffffffffULL));
    v = hi * base + lo;
    if (neg) v = -v;
    acoeff[e] = Rat(v);
  }
  CyclotomicNumber total =
      CyclotomicNumber::from_power_coeffs(m, acoeff) * ctx.chi1bar_total();

  for (std::int64_t e = 0; e < m; ++e) {
    CyclotomicNumber row = CyclotomicNumber::zero(m);
    bool any = false;
    for (std::int64_t t = 1; t <= q1; ++t) {
      std::int64_t w = B[static_cast<size_t>(e) * (q1 + 1) + t];
      if (w == 0) continue;
      row += ctx.chi1bar_suffix(t) * make_rat(w, 1);
      any = true;
    }
    if (any) total += CyclotomicNumber::root_of_unity(e, m) * row;
  }
  return total / make_rat(-r * q1, 1);
}

CyclotomicNumber eval_floor(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  if (c >= 1 && c <= kMaxKernelC && ctx.q1() <= kMaxKernelQ1)
    return eval_floor_kernel(ctx, a, c);
  return eval_floor_reference(ctx, a, c);
}

CyclotomicNumber eval(const DedekindContext& ctx, const SL2Matrix& gamma) {
  if (!is_gamma0(gamma, ctx.level()))
    throw MembershipError("eval: matrix not in Gamma_0(q1*q2)");
  if (gamma.c == 0) return CyclotomicNumber::zero(ctx.m());
  if (gamma.c < 0) return eval(ctx, -gamma);
  CyclotomicNumber value;
  switch (ctx.policy().formula) {
    case EvalFormula::kBernoulli: value = eval_bernoulli(ctx, gamma.a, gamma.c); break;
    case EvalFormula::kFractional: value = eval_fractional(ctx, gamma.a, gamma.c); break;
    case EvalFormula::kFloor: value = eval_floor(ctx, gamma.a, gamma.c); break;
  }
  if (ctx.policy().cross_check) {
    CyclotomicNumber ref = eval_bernoulli(ctx, gamma.a, gamma.c);
    if (!(ref == value))
      throw Error("eval: cross-check mismatch between formulas (implementation bug)");
  }
  return value;
}

SumValue evaluate_detailed(const DedekindContext& ctx, const SL2Matrix& gamma) {
  SumValue sv{eval(ctx, gamma), ctx.policy().formula, gamma.a, gamma.c};
  if (gamma.c < 0) {
    sv.a = -gamma.a;
    sv.c = -gamma.c;
  }
  return sv;
}

Rat classical_sum(std::int64_t h, std::int64_t k) {
  if (k < 1) throw InvalidArgumentError("classical_sum: k >= 1 required");
  if (i64_gcd(h, k) != 1) throw CoprimalityError("classical_sum: gcd(h, k) = 1 required");
  Rat acc(0);
  Int hi(static_cast<long>(h));
  for (std::int64_t j = 1; j < k; ++j) {
    Rat s1 = sawtooth(make_rat(j, k));
    if (s1 == 0) continue;
    Rat s2 = sawtooth(make_rat(hi * j, Int(static_cast<long>(k))));
    if (s2 == 0) continue;
    acc += s1 * s2;
  }
  return acc;
}

CyclotomicNumber vanishing_zsum(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  check_sum_args(ctx, a, c);
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2(), m = ctx.m();
  const auto& e1 = ctx.pair().chi1bar_table();
  const auto& e2 = ctx.pair().chi2bar_table();
  std::vector<Rat> acc(m, Rat(0));
  Int ai(static_cast<long>(a));
  for (std::int64_t j = 0; j < c; ++j) {
    std::int64_t ej = e2[j % q2];
    if (ej < 0) continue;
    Rat ajc = make_rat(ai * j, Int(static_cast<long>(c)));
    for (std::int64_t n = 0; n < q1; ++n) {
      std::int64_t en = e1[n];
      if (en < 0) continue;
      acc[(ej + en) % m] += fractional(make_rat(n, q1) + ajc);
    }
  }
  return CyclotomicNumber::from_power_coeffs(m, acc);
}

bool nonintegrality_scan(const DedekindContext& ctx, std::int64_t a, std::int64_t c) {
  check_sum_args(ctx, a, c);
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2();
  for (std::int64_t j = 0; j < c; ++j) {
    if (j % q2 == 0) continue;
    // a j / c + n / q1 integral iff (a j q1 + n c) = 0 mod (c q1)
    Int lhs = Int(static_cast<long>(a)) * j * q1;
    for (std::int64_t n = 0; n < q1; ++n) {
      Int num = lhs + Int(static_cast<long>(n)) * c;
      if (num % (Int(static_cast<long>(c)) * q1) == 0) return false;
    }
  }
  return true;
}

CyclotomicNumber crossed_hom_defect(const DedekindContext& ctx, const SL2Matrix& g1,
                                    const SL2Matrix& g2) {
  if (!is_gamma0(g1, ctx.level()) || !is_gamma0(g2, ctx.level()))
    throw MembershipError("crossed_hom_defect: inputs must lie in Gamma_0(q1*q2)");
  CyclotomicNumber lhs = eval(ctx, g1 * g2);
  CyclotomicNumber rhs = eval(ctx, g1) + psi(g1, ctx.pair()) * eval(ctx, g2);
  return lhs - rhs;
}

CyclotomicNumber reciprocity_defect(const DedekindContext& ctx, const SL2Matrix& gamma) {
  if (!is_gamma0(gamma, ctx.level()))
    throw MembershipError("reciprocity_defect: matrix not in Gamma_0(q1*q2)");
  if (gamma.c < 1) throw InvalidArgumentError("reciprocity_defect: c >= 1 required");
  SL2Matrix dual = dual_gamma(gamma, ctx.level());
  DedekindContext swapped = ctx.swapped();
  CyclotomicNumber s12 = eval(ctx, gamma);
  CyclotomicNumber s21 = eval(swapped, dual);
  if (ctx.pair().both_odd()) return s12 + s21;
  return s12 - s21;
}

ReciprocityConstant reciprocity_constant(const DedekindContext& ctx, Rng& rng,
                                         std::int64_t budget, std::int64_t verify_samples) {
  if (!ctx.pair().both_odd())
    throw ParityError("reciprocity_constant: both characters must be odd");
  ReciprocityConstant out;
  out.value = CyclotomicNumber::zero(ctx.m());
  CyclotomicNumber one = CyclotomicNumber::one(ctx.m());
  std::optional<CyclotomicNumber> constant;
  std::int64_t found_at = -1;
  for (std::int64_t i = 0; i < budget; ++i) {
    SL2Matrix g = random_gamma0(ctx.level(), 3, rng);
    CyclotomicNumber p = psi(g, ctx.pair());
    if (p == one) continue;
    CyclotomicNumber defect = reciprocity_defect(ctx, g);
    constant = defect * (one - p).inverse();
    found_at = i;
    break;
  }
  if (!constant) return out;  // inconclusive
  out.found = true;
  out.value = *constant;
  (void)found_at;

  out.constant_ok = true;
  for (std::int64_t i = 0; i < verify_samples; ++i) {
    SL2Matrix g = random_gamma0(ctx.level(), 3, rng);
    CyclotomicNumber p = psi(g, ctx.pair());
    CyclotomicNumber defect = reciprocity_defect(ctx, g);
    CyclotomicNumber expected = (one - p) * out.value;
    ++out.samples_checked;
    if (!(defect == expected)) {
      out.constant_ok = false;
      break;
    }
  }

  std::int64_t q1 = ctx.q1(), q2 = ctx.q2();
  out.class_number_applicable = ctx.pair().both_quadratic() && q1 > 4 && q2 > 4 &&
                                q1 % 2 == 1 && q2 % 2 == 1;
  if (out.class_number_applicable) {
    Int expected = Int(static_cast<long>(class_number(q1))) * class_number(q2);
    out.class_number_ok =
        out.value == CyclotomicNumber::from_rat(ctx.m(), Rat(expected));
  }
  return out;
}

DenominatorReport denominator_report(const DedekindContext& ctx, const SL2Matrix& gamma) {
  DenominatorReport rep;
  rep.value = eval(ctx, gamma);
  std::int64_t c = gamma.c < 0 ? -gamma.c : gamma.c;
  rep.r = c == 0 ? 0 : c / ctx.level();
  std::int64_t q1 = ctx.q1(), q2 = ctx.q2();
  std::int64_t g = i64_gcd(q1, q2);
  auto scaled_integral = [&](std::int64_t s) {
    return (rep.value * make_rat(s, 1)).is_integral();
  };
  rep.rq1_ok = rep.r == 0 ? rep.value.is_zero() : scaled_integral(rep.r * q1);
  rep.q1_bound_ok = scaled_integral(q1);
  rep.q2_bound_ok = scaled_integral(q2);
  rep.gcd_bound_ok = scaled_integral(g);
  rep.integral = rep.value.is_integral();
  rep.cond_gamma1 = is_gamma1(gamma, ctx.level());
  rep.cond_gamma0_quadratic = is_gamma0(gamma, ctx.level()) && ctx.pair().both_quadratic() &&
                              q1 > 4 && q2 > 4 && q1 % 2 == 1 && q2 % 2 == 1;
  rep.gcd_bound_asserted = rep.cond_gamma1 || rep.cond_gamma0_quadratic;
  return rep;
}

}  // namespace dedesum
