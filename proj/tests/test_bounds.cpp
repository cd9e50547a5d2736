#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cubicount/bounds.hpp"

using namespace cubicount;

namespace {

CubicForm fermat() {
  return CubicForm::from_monomials({{{3, 0, 0}, 1}, {{0, 3, 0}, 1}, {{0, 0, 3}, 1}});
}

CubicForm f6() {
  return CubicForm::from_monomials({{{3, 0, 0}, 1}, {{0, 3, 0}, 1}, {{0, 0, 3}, -6}});
}

}  // namespace

TEST_CASE("theorem1_bound") {
  BoundInputs in;
  in.B = 3;
  in.r = 0;
  in.m = 1;
  Theorem1Value v = theorem1_bound(in);
  // (3^(2/3) + 1) log 3
  CHECK(v.value == doctest::Approx(3.3838179381).epsilon(1e-9));
  CHECK(v.m_pow_r == 1);
  CHECK(v.exponent == make_rat(2, 3));

  // the m^r factor scales the value exactly by m per rank step
  in.B = 1000;
  in.m = 3;
  for (long r = 0; r < 5; ++r) {
    in.r = r;
    double lo = theorem1_bound(in).value;
    in.r = r + 1;
    double hi = theorem1_bound(in).value;
    CHECK(hi == doctest::Approx(3.0 * lo).epsilon(1e-12));
  }

  in.B = 1000000;
  in.r = 1;
  in.m = optimal_m(in.B);
  double at_opt = theorem1_bound(in).value;
  in.m = 1;
  double at_one = theorem1_bound(in).value;
  CHECK(at_opt <= at_one);

  in.B = 2;
  CHECK_THROWS_AS(theorem1_bound(in), std::invalid_argument);
}

TEST_CASE("optimal_m") {
  CHECK(optimal_m(3) == 2);
  CHECK(optimal_m(55) == 3);  // just above e^4
  CHECK(optimal_m(pow_ui(BigInt(10), 44)) == 11);  // log B ~ 101.3
  CHECK_THROWS_AS(optimal_m(2), std::invalid_argument);
}

TEST_CASE("parameter_choice") {
  for (long m : {1L, 2L, 3L}) {
    auto pc = parameter_choice(1000, m, BigRat(6), BigRat(1));
    CHECK(pc.b == m * m);
    CHECK(pc.s == 3 * BigInt(m) * m * (pc.a + 1));
  }
  auto pc = parameter_choice(1000, 1, BigRat(6), BigRat(1));
  CHECK(pc.a == 733);
  CHECK(pc.s == 2202);
  CHECK(pc.ineq8_holds);
  CHECK(pc.ineq8_rhs == doctest::Approx(712.79).epsilon(1e-3));

  // increasing u never decreases a
  BigInt prev_a = 0;
  for (int u = 1; u <= 6; ++u) {
    auto c = parameter_choice(500, 2, BigRat(4), BigRat(u));
    CHECK(c.a >= prev_a);
    prev_a = c.a;
  }
}

TEST_CASE("mertens_diagnostics") {
  auto d = mertens_diagnostics(10);
  CHECK(d.sum_logp_over_p == doctest::Approx(1.312653).epsilon(1e-6));
  CHECK(d.log_s == doctest::Approx(2.302585).epsilon(1e-6));

  auto d2 = mertens_diagnostics(2);
  CHECK(d2.sum_logp_over_p == doctest::Approx(0.346574).epsilon(1e-6));

  auto d5 = mertens_diagnostics(100000);
  CHECK(d5.deviation <= 2.0);

  CHECK_THROWS_AS(mertens_diagnostics(1), std::invalid_argument);
}

TEST_CASE("mertens deviation stays below 2 over the whole range") {
  auto primes = primes_up_to(100000);
  double sum = 0;
  std::size_t idx = 0;
  for (std::uint64_t s = 10; s <= 100000; ++s) {
    while (idx < primes.size() && primes[idx] <= s) {
      sum += std::log(static_cast<double>(primes[idx])) / primes[idx];
      ++idx;
    }
    CHECK(std::abs(sum - std::log(static_cast<double>(s))) <= 2.0);
  }
}

TEST_CASE("lemma8_check") {
  auto c = lemma8_check(2);
  CHECK(c.lhs == doctest::Approx(0.346574).epsilon(1e-6));
  CHECK(c.rhs == doctest::Approx(1.633490).epsilon(1e-5));
  CHECK(c.holds);

  c = lemma8_check(6);
  CHECK(c.lhs == doctest::Approx(0.712778).epsilon(1e-6));
  CHECK(c.rhs == doctest::Approx(2.583210).epsilon(1e-5));
  CHECK(c.holds);

  // primorial(29)
  BigInt primorial = BigInt(2) * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29;
  CHECK(lemma8_check(primorial).holds);
  CHECK_THROWS_AS(lemma8_check(1), std::invalid_argument);
}

TEST_CASE("lemma8 holds for every square-free Pi up to 10^4") {
  const std::uint32_t limit = 10000;
  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      for (std::uint32_t j = i; j <= limit; j += i)
        if (spf[j] == 0) spf[j] = i;
    }
  }
  for (std::uint32_t n = 2; n <= limit; ++n) {
    double lhs = 0;
    std::uint32_t v = n;
    bool squarefree = true;
    while (v > 1) {
      std::uint32_t p = spf[v];
      int mult = 0;
      while (v % p == 0) { v /= p; ++mult; }
      if (mult > 1) { squarefree = false; break; }
      lhs += std::log(static_cast<double>(p)) / p;
    }
    if (!squarefree) continue;
    CHECK(lhs <= std::log(std::log(static_cast<double>(n))) + 2.0);
  }
}

TEST_CASE("theorem9_exponent") {
  auto rep = theorem9_exponent(5);
  CHECK(rep.m_values[0] == make_rat(-7, 16));
  CHECK(rep.m_values[4] == make_rat(1, 240));
  // negative exactly through l = 4
  for (long l = 1; l <= 16; ++l) {
    if (l <= 4) CHECK(rep.m_values[l - 1] < 0);
    else CHECK(rep.m_values[l - 1] > 0);
  }
  CHECK(rep.partial_sums[14] < 0);
  CHECK(rep.partial_sums[15] > 0);

  // exponent arithmetic and the r = 16 split
  auto r16 = theorem9_exponent(16);
  CHECK(r16.exponent == make_rat(16, 2));
  auto r1 = theorem9_exponent(1);
  CHECK(r1.exponent == make_rat(1, 2) + make_rat(7, 16));

  // the uniform corollary: exponent <= 1 + r/2, max of -partial sums <= 1
  BigRat max_neg(-1000);
  for (long r = 1; r <= 30; ++r) {
    auto rr = theorem9_exponent(r);
    CHECK(rr.corollary_holds);
    if (r <= 15) {
      BigRat neg = -rr.partial_sums[r - 1];
      if (neg > max_neg) max_neg = neg;
    }
  }
  CHECK(max_neg <= 1);

  CHECK_THROWS_AS(theorem9_exponent(0), std::invalid_argument);
}

TEST_CASE("reduction_diagnostics") {
  auto d = reduction_diagnostics(fermat(), 100, 3, 100);
  CHECK(d.n_le_9);
  CHECK(d.pi_c == 3);

  auto d6 = reduction_diagnostics(f6(), 100, 3, 100);
  CHECK(d6.log_norm_ratio == doctest::Approx(std::log(6.0) / (30 * std::log(100.0))).epsilon(1e-9));
  CHECK(d6.log_pi_ratio == doctest::Approx(std::log(mpz_get_d(d6.pi_c.get_mpz_t())) /
                                           std::log(100.0)).epsilon(1e-9));
}

TEST_CASE("uniform-bound shadow stays within a small window") {
  // theorem1 at m = optimal_m(B), divided by (log B)^(2 + r/2)
  for (long r = 0; r <= 5; ++r) {
    double lo = 1e300, hi = 0;
    for (int k = 3; k <= 12; ++k) {
      BigInt B = pow_ui(BigInt(10), k);
      BoundInputs in;
      in.B = B;
      in.r = r;
      in.m = optimal_m(B);
      double val = theorem1_bound(in).value;
      double denom = std::pow(std::log(std::pow(10.0, k)), 2.0 + r / 2.0);
      double ratio = val / denom;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 10.0);
  }
}
