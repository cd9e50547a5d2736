#include "cubicount/bounds.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "cubicount/real.hpp"

namespace cubicount {

namespace {

constexpr mpfr_prec_t kBasePrec = 256;
constexpr mpfr_prec_t kMaxPrec = 8192;

// Floor of a transcendental expression, re-evaluated at higher precision
// when the value sits too close to an integer.
BigInt floor_adaptive(const std::function<Real(mpfr_prec_t)>& f) {
  for (mpfr_prec_t prec = kBasePrec;; prec *= 4) {
    Real v = f(prec);
    BigInt fl = v.floor_int();
    Real frac = v - Real::of(fl, prec);
    Real band = Real::of(std::ldexp(1.0, -64), prec);
    Real upper = Real::of(1.0, prec) - band;
    if ((frac.cmp(band) >= 0 && frac.cmp(upper) <= 0) || prec >= kMaxPrec) return fl;
  }
}

// Sign of lhs - rhs with the same near-tie precision escalation.
int compare_adaptive(const std::function<Real(mpfr_prec_t)>& lhs,
                     const std::function<Real(mpfr_prec_t)>& rhs) {
  for (mpfr_prec_t prec = kBasePrec;; prec *= 4) {
    Real l = lhs(prec), r = rhs(prec);
    Real diff = l - r;
    Real scale = Real::abs(l) + Real::abs(r) + Real::of(1.0, prec);
    Real band = scale * Real::of(std::ldexp(1.0, -64), prec);
    if (Real::abs(diff).cmp(band) > 0 || prec >= kMaxPrec) return diff.sign();
  }
}

}  // namespace

Theorem1Value theorem1_bound(const BoundInputs& in) {
  if (in.B < 3) throw std::invalid_argument("theorem1_bound: B must be >= 3");
  if (in.m < 1) throw std::invalid_argument("theorem1_bound: m must be positive");
  if (in.r < 0) throw std::invalid_argument("theorem1_bound: r must be nonnegative");
  Theorem1Value out;
  out.m_pow_r = pow_ui(BigInt(in.m), static_cast<unsigned long>(in.r));
  out.exponent = make_rat(2, 3 * BigInt(in.m) * BigInt(in.m));
  Real logb = Real::log(Real::of(in.B, kBasePrec));
  Real bpow = Real::exp(Real::of(out.exponent, kBasePrec) * logb);
  BigInt m2 = BigInt(in.m) * BigInt(in.m);
  Real value = Real::of(out.m_pow_r, kBasePrec) * (bpow + Real::of(m2, kBasePrec)) * logb;
  out.value = value.to_double();
  out.b_pow = bpow.to_double();
  out.log_b = logb.to_double();
  return out;
}

long optimal_m(const BigInt& B) {
  if (B < 3) throw std::invalid_argument("optimal_m: B must be >= 3");
  BigInt fl = floor_adaptive([&](mpfr_prec_t prec) {
    return Real::sqrt(Real::log(Real::of(B, prec)));
  });
  return 1 + fl.get_si();
}

ParameterChoice parameter_choice(const BigInt& B, long m, const BigRat& A, const BigRat& u) {
  if (B < 3) throw std::invalid_argument("parameter_choice: B must be >= 3");
  if (m < 1) throw std::invalid_argument("parameter_choice: m must be positive");
  ParameterChoice out;
  BigInt m2 = BigInt(m) * BigInt(m);
  out.b = static_cast<long>(m2.get_si());
  BigRat two_thirds_m2 = make_rat(2, 3 * m2);
  out.a = 1 + floor_adaptive([&](mpfr_prec_t prec) {
            Real logb = Real::log(Real::of(B, prec));
            Real bpow = Real::exp(Real::of(two_thirds_m2, prec) * logb);
            return Real::of(u, prec) * bpow * logb / Real::of(m2, prec) +
                   Real::of(A, prec) * logb;
          });
  out.s = 3 * (m2 * out.a + out.b);

  // exact exponent 2 (a + A b) / s
  BigRat e = BigRat(2) * (BigRat(out.a) + A * BigRat(out.b)) / BigRat(out.s);
  auto rhs = [&](mpfr_prec_t prec) {
    Real logb = Real::log(Real::of(B, prec));
    return Real::of(u, prec) * Real::exp(Real::of(e, prec) * logb) * logb;
  };
  auto lhs = [&](mpfr_prec_t prec) { return Real::of(out.s, prec); };
  out.ineq8_lhs = lhs(kBasePrec).to_double();
  out.ineq8_rhs = rhs(kBasePrec).to_double();
  out.ineq8_holds = compare_adaptive(lhs, rhs) > 0;
  return out;
}

MertensDiagnostics mertens_diagnostics(std::uint64_t s) {
  if (s < 2) throw std::invalid_argument("mertens_diagnostics: s must be >= 2");
  if (s > 10000000) throw std::invalid_argument("mertens_diagnostics: s too large");
  MertensDiagnostics out;
  out.s = s;
  Real sum_ratio(kBasePrec), sum_log(kBasePrec);
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(s))) {
    Real lp = Real::log(Real::of(static_cast<unsigned long>(p), kBasePrec));
    sum_log = sum_log + lp;
    sum_ratio = sum_ratio + lp / Real::of(static_cast<unsigned long>(p), kBasePrec);
  }
  Real logs = Real::log(Real::of(static_cast<unsigned long>(s), kBasePrec));
  out.sum_logp_over_p = sum_ratio.to_double();
  out.log_s = logs.to_double();
  out.deviation = Real::abs(sum_ratio - logs).to_double();
  out.sum_logp = sum_log.to_double();
  out.chebyshev_ratio = (sum_log / Real::of(static_cast<unsigned long>(s), kBasePrec)).to_double();
  return out;
}

Lemma8Check lemma8_check(const BigInt& pi) {
  if (pi <= 1) throw std::invalid_argument("lemma8_check: Pi must be > 1");
  // distinct prime divisors via trial division, one large leftover allowed
  std::vector<BigInt> primes;
  BigInt rest = pi;
  for (std::uint32_t p : primes_up_to(1000000)) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      primes.emplace_back(p);
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p))
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
    if (rest == 1) break;
    if (BigInt(p) * BigInt(p) > rest) break;
  }
  if (rest > 1) {
    if (mpz_probab_prime_p(rest.get_mpz_t(), 40) == 0)
      throw std::invalid_argument("lemma8_check: could not factor Pi");
    primes.push_back(rest);
  }
  Real lhs(kBasePrec);
  for (const BigInt& p : primes) {
    Real rp = Real::of(p, kBasePrec);
    lhs = lhs + Real::log(rp) / rp;
  }
  auto lhs_fn = [&](mpfr_prec_t prec) {
    Real acc(prec);
    for (const BigInt& p : primes) {
      Real rp = Real::of(p, prec);
      acc = acc + Real::log(rp) / rp;
    }
    return acc;
  };
  auto rhs_fn = [&](mpfr_prec_t prec) {
    return Real::log(Real::log(Real::of(pi, prec))) + Real::of(2.0, prec);
  };
  Lemma8Check out;
  out.lhs = lhs.to_double();
  out.rhs = rhs_fn(kBasePrec).to_double();
  out.holds = compare_adaptive(lhs_fn, rhs_fn) <= 0;
  return out;
}

Theorem9Report theorem9_exponent(long r) {
  if (r < 1) throw std::invalid_argument("theorem9_exponent: r must be >= 1");
  Theorem9Report out;
  out.r = r;
  long top = std::max(r, 16L);
  BigRat acc(0);
  for (long l = 1; l <= top; ++l) {
    BigRat ml = make_rat(BigInt(l) * l - 4 * BigInt(l) - 4, 8 * BigInt(l) * l + 8 * BigInt(l));
    out.m_values.push_back(ml);
    acc += ml;
    out.partial_sums.push_back(acc);
  }
  if (r < 16) {
    out.exponent = make_rat(r, 2) - out.partial_sums[r - 1];
  } else {
    out.exponent = make_rat(r, 2);
  }
  out.corollary_holds = out.exponent <= make_rat(r + 2, 2);
  return out;
}

ReductionDiagnostics reduction_diagnostics(const CubicForm& f, const BigInt& B,
                                           std::size_t n_observed, std::uint64_t scan_bound) {
  if (B < 3) throw std::invalid_argument("reduction_diagnostics: B must be >= 3");
  ReductionDiagnostics out;
  Real logb = Real::log(Real::of(B, kBasePrec));
  BigInt norm = f.coefficient_norm();
  out.log_norm_f = log_to_double(norm);
  out.log_norm_ratio = (Real::log(Real::of(norm, kBasePrec)) /
                        (Real::of(30ul, kBasePrec) * logb))
                           .to_double();
  ReductionProfile prof = reduction_profile(f, scan_bound);
  out.pi_c = prof.pi_c;
  out.scan_bound = scan_bound;
  out.log_pi_c = log_to_double(prof.pi_c);
  out.log_pi_ratio = (Real::log(Real::of(prof.pi_c, kBasePrec)) / logb).to_double();
  out.n_le_9 = n_observed <= 9;
  return out;
}

}  // namespace cubicount
