/**
 * @file bounds.hpp
 * @brief Closed-form bound and diagnostic arithmetic: the uniform
 *        point-count bound, the working parameter choice, prime log sums,
 *        and the successive-minima exponent table.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "cubicount/curve.hpp"

namespace cubicount {

struct BoundInputs {
  BigInt B;       // >= 3
  long r = 0;     // externally supplied rank, never computed here
  long m = 1;     // positive
  BigRat A = 6;   // height-propagation exponent, configuration input
  BigRat u = 1;   // slack constant >= 1, configuration input
};

struct Theorem1Value {
  double value = 0;    // m^r (B^{2/(3 m^2)} + m^2) log B, natural log
  BigInt m_pow_r;      // exact factor m^r
  BigRat exponent;     // exact exponent 2/(3 m^2)
  double b_pow = 0;    // B^{2/(3 m^2)}
  double log_b = 0;
};

/// The uniform bound value; rejects B < 3.
Theorem1Value theorem1_bound(const BoundInputs& in);

/// 1 + floor(sqrt(log B)) for B >= 3.
long optimal_m(const BigInt& B);

struct ParameterChoice {
  BigInt a;
  long b = 1;          // = m^2
  BigInt s;            // 3 (m^2 a + b) = 3 m^2 (a + 1)
  double ineq8_lhs = 0;   // s
  double ineq8_rhs = 0;   // u B^{2(a + A b)/s} log B
  bool ineq8_holds = false;
};

/// b = m^2 and a = 1 + [u B^{2/(3 m^2)} log B / m^2 + A log B], with the
/// size inequality evaluated for these parameters.
ParameterChoice parameter_choice(const BigInt& B, long m, const BigRat& A, const BigRat& u);

struct MertensDiagnostics {
  std::uint64_t s = 0;
  double sum_logp_over_p = 0;
  double log_s = 0;
  double deviation = 0;        // |sum log p / p - log s|
  double sum_logp = 0;
  double chebyshev_ratio = 0;  // (sum log p) / s
};

MertensDiagnostics mertens_diagnostics(std::uint64_t s);  // s >= 2

struct Lemma8Check {
  double lhs = 0;  // sum over p | Pi of log p / p
  double rhs = 0;  // log log Pi + 2
  bool holds = false;
};

/// Prime-divisor log sum test for Pi > 1. Pi must factor over primes
/// below 10^6 up to at most one larger prime factor.
Lemma8Check lemma8_check(const BigInt& pi);

struct Theorem9Report {
  long r = 0;
  std::vector<BigRat> m_values;      // m_l = (l^2-4l-4)/(8l^2+8l), l = 1..max(r,16)
  std::vector<BigRat> partial_sums;  // prefix sums of m_l
  BigRat exponent;                   // r/2 - sum_{l<=r} m_l for r < 16, else r/2
  bool corollary_holds = false;      // exponent <= 1 + r/2
};

Theorem9Report theorem9_exponent(long r);  // r >= 1

struct ReductionDiagnostics {
  double log_norm_f = 0;
  double log_norm_ratio = 0;  // log ||F|| / (30 log B)
  BigInt pi_c = 1;
  std::uint64_t scan_bound = 0;
  double log_pi_c = 0;
  double log_pi_ratio = 0;    // log Pi_C / log B
  bool n_le_9 = false;
};

/// Purely diagnostic ratios; no pass/fail since the implicit constants
/// are not explicit.
ReductionDiagnostics reduction_diagnostics(const CubicForm& f, const BigInt& B,
                                           std::size_t n_observed,
                                           std::uint64_t scan_bound = 10000);

}  // namespace cubicount
