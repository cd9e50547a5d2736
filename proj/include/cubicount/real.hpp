/**
 * @file real.hpp
 * @brief Small RAII wrapper over MPFR used by the bound formulas.
 *
 * Exact rational cores stay in BigInt/BigRat; this type only carries the
 * transcendental parts (log, exp, powers) at a controlled precision so
 * reported values meet a 1e-9 relative tolerance with room to spare.
 */
#pragma once

#include <mpfr.h>

#include <utility>

#include "cubicount/arith.hpp"

namespace cubicount {

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 256) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  Real& operator=(Real o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  static Real of(double d, mpfr_prec_t prec = 256) {
    Real r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }
  static Real of(unsigned long n, mpfr_prec_t prec = 256) {
    Real r(prec);
    mpfr_set_ui(r.v_, n, MPFR_RNDN);
    return r;
  }
  static Real of(const BigInt& n, mpfr_prec_t prec = 256) {
    Real r(prec);
    mpfr_set_z(r.v_, n.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static Real of(const BigRat& q, mpfr_prec_t prec = 256) {
    Real r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  BigInt floor_int() const {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
  }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  int sign() const { return mpfr_sgn(v_); }
  int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }

  friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }
  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  static Real log(const Real& a) { return un(a, mpfr_log); }
  static Real exp(const Real& a) { return un(a, mpfr_exp); }
  static Real sqrt(const Real& a) { return un(a, mpfr_sqrt); }
  static Real abs(const Real& a) {
    Real r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  /// base^e as exp(e log base); base must be positive.
  static Real pow(const Real& base, const Real& e) { return exp(e * log(base)); }

 private:
  using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  using UnOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
  static Real bin(const Real& a, const Real& b, BinOp op) {
    Real r(std::max(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  static Real un(const Real& a, UnOp op) {
    Real r(a.precision());
    op(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  mpfr_t v_;
};

/// log of a positive big integer at the default 256-bit precision.
inline double log_to_double(const BigInt& n, mpfr_prec_t prec = 256) {
  return Real::log(Real::of(n, prec)).to_double();
}

}  // namespace cubicount
