#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dedesum/characters.hpp"
#include "dedesum/cyclotomic.hpp"
#include "dedesum/modgroup.hpp"
#include "dedesum/rng.hpp"

namespace dedesum {

enum class EvalFormula { kBernoulli, kFractional, kFloor };

const char* formula_name(EvalFormula f);

struct EvalPolicy {
  EvalFormula formula = EvalFormula::kFloor;
  /// Re-evaluate every eval() through the defining Bernoulli sum and
  /// error on mismatch (an implementation bug, never expected).
  bool cross_check = false;
};

/// A validated character pair plus the cached tables the evaluators read:
/// chi-bar exponent tables and suffix sums of chi1-bar values.
class DedekindContext {
 public:
  explicit DedekindContext(CharacterPair pair, EvalPolicy policy = {});

  const CharacterPair& pair() const { return pair_; }
  std::int64_t level() const { return pair_.level(); }  // N = q1*q2
  std::int64_t q1() const { return pair_.q1(); }
  std::int64_t q2() const { return pair_.q2(); }
  std::int64_t m() const { return pair_.m(); }
  const EvalPolicy& policy() const { return policy_; }

  /// sum_{n=t}^{q1-1} chi1bar(n); index t in [0, q1], empty sum at q1.
  const CyclotomicNumber& chi1bar_suffix(std::int64_t t) const { return suffix1_[t]; }
  const CyclotomicNumber& chi1bar_total() const { return suffix1_[0]; }

  DedekindContext swapped() const { return DedekindContext(pair_.swapped(), policy_); }

 private:
  CharacterPair pair_;
  EvalPolicy policy_;
  std::vector<CyclotomicNumber> suffix1_;
};

/// The defining double sum
///   sum_{j mod c} sum_{n mod q1} chi2bar(j) chi1bar(n) B1(j/c) B1(n/q1 + aj/c)
/// evaluated literally over j in [0, c), n in [0, q1) with exact
/// rationals. Preconditions: q1*q2 | c, c >= 1, gcd(a, c) = 1.
CyclotomicNumber eval_bernoulli(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// The fractional-part form
///   sum chi2bar(j) chi1bar(n) {j/c} {aj/c + n/q1},
/// same preconditions.
CyclotomicNumber eval_fractional(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// The floor form
///   -(1/(r q1)) sum chi2bar(j) chi1bar(n) floor(j/q2) floor(aj/c + n/q1)
/// with c = r q1 q2. Dispatches to the fast integer-bucketing kernel when
/// c is in kernel range, otherwise to the literal reference evaluator.
CyclotomicNumber eval_floor(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// Literal big-integer reference for the floor form (kernel bypassed).
CyclotomicNumber eval_floor_reference(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// Fast kernel for the floor form: one pass over j with incremental
/// mod-c counters, per-(character value, threshold) integer histograms,
/// and a final exact cyclotomic combination. Requires c within 2^40.
CyclotomicNumber eval_floor_kernel(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// S(gamma) with the sign conventions: c > 0 evaluates the policy's
/// formula at (a, c); c = 0 gives 0; c < 0 evaluates at -gamma.
/// Requires gamma in Gamma_0(q1*q2).
CyclotomicNumber eval(const DedekindContext& ctx, const SL2Matrix& gamma);

/// Value plus provenance, for reporting surfaces.
struct SumValue {
  CyclotomicNumber value;
  EvalFormula formula;
  std::int64_t a = 0, c = 0;
};

SumValue evaluate_detailed(const DedekindContext& ctx, const SL2Matrix& gamma);

/// Classical Dedekind sum s(h, k) = sum_{j mod k} B1(j/k) B1(hj/k),
/// gcd(h, k) = 1, k >= 1.
Rat classical_sum(std::int64_t h, std::int64_t k);

/// The Z-sum of the fractional-form cancellation:
/// sum chi2bar(j) chi1bar(n) {aj/c + n/q1}; identically zero.
CyclotomicNumber vanishing_zsum(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// Exhaustive check that aj/c + n/q1 is never an integer for q2 by j.
bool nonintegrality_scan(const DedekindContext& ctx, std::int64_t a, std::int64_t c);

/// S(g1 g2) - S(g1) - psi(g1) S(g2); contract: exactly zero.
CyclotomicNumber crossed_hom_defect(const DedekindContext& ctx, const SL2Matrix& g1,
                                    const SL2Matrix& g2);

/// Even characters: S_{12}(gamma) - S_{21}(gamma'); contract zero.
/// Odd characters: S_{12}(gamma) + S_{21}(gamma'); contract
/// (1 - psi(gamma)) * C for the pair constant C.
CyclotomicNumber reciprocity_defect(const DedekindContext& ctx, const SL2Matrix& gamma);

struct ReciprocityConstant {
  bool found = false;        // false: no sample with psi != 1 in budget
  CyclotomicNumber value;    // C
  bool constant_ok = false;  // defect matched (1 - psi)*C on all samples
  bool class_number_applicable = false;  // odd quadratic, q1, q2 > 4 odd
  bool class_number_ok = false;          // C = h(-q1) h(-q2)
  std::int64_t samples_checked = 0;
};

/// Empirical pair constant C with reciprocity_defect = (1 - psi(gamma))*C,
/// from random Gamma_0 samples. Requires both characters odd.
ReciprocityConstant reciprocity_constant(const DedekindContext& ctx, Rng& rng,
                                         std::int64_t budget = 10000,
                                         std::int64_t verify_samples = 24);

struct DenominatorReport {
  CyclotomicNumber value;
  std::int64_t r = 0;              // c = r * q1 * q2 (0 when c = 0)
  bool rq1_ok = false;             // r*q1*S integral
  bool q1_bound_ok = false;        // q1*S integral
  bool q2_bound_ok = false;        // q2*S integral
  bool gcd_bound_ok = false;       // gcd(q1,q2)*S integral
  bool integral = false;           // S itself integral
  bool cond_gamma1 = false;        // gamma in Gamma_1(q1 q2)
  bool cond_gamma0_quadratic = false;  // Gamma_0, quadratic, q1,q2 > 4 odd
  bool gcd_bound_asserted = false;     // one of the two conditions holds
};

DenominatorReport denominator_report(const DedekindContext& ctx, const SL2Matrix& gamma);

}  // namespace dedesum
