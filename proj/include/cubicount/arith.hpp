/**
 * @file arith.hpp
 * @brief Exact big-integer/rational arithmetic, prime fields, and
 *        fraction-free exact linear algebra.
 *
 * Big integers and rationals are GMP's mpz_class/mpq_class; everything
 * built on top of them (determinants, nullspaces, valuations, root
 * finding over F_p) is exact. No floating point anywhere in this module.
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cubicount {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Canonical rational num/den: gcd(|num|,den)=1, den>0. den must be nonzero.
BigRat make_rat(const BigInt& num, const BigInt& den);

BigInt pow_ui(const BigInt& base, unsigned long e);

/// gcd of a coefficient vector (0 for the empty/zero vector).
BigInt content(const std::vector<BigInt>& v);

/// Divide by the content and flip signs so the first nonzero entry is
/// positive. Zero vectors are left untouched.
void make_primitive(std::vector<BigInt>& v);

// ---- primes ----------------------------------------------------------

/// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime(std::uint64_t n);
std::uint64_t next_prime_after(std::uint64_t n);
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Largest k with p^k | n. n must be nonzero, p prime.
long valuation(const BigInt& n, std::uint64_t p);
/// v_p(num) - v_p(den). r must be nonzero.
long valuation(const BigRat& r, std::uint64_t p);

// ---- prime field -----------------------------------------------------

/// Element of F_p, canonical value in [0, p). Operations refuse to mix
/// moduli.
struct Fp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;
};

Fp fp_from(std::uint64_t p, std::uint64_t value);
Fp fp_from(std::uint64_t p, std::int64_t value);
Fp fp_from(std::uint64_t p, const BigInt& value);
inline Fp fp_zero(std::uint64_t p) { return Fp{0, p}; }
inline Fp fp_one(std::uint64_t p) { return Fp{p == 1 ? 0u : 1u, p}; }

bool operator==(const Fp& a, const Fp& b);
inline bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
Fp operator+(const Fp& a, const Fp& b);
Fp operator-(const Fp& a, const Fp& b);
Fp operator*(const Fp& a, const Fp& b);
Fp operator-(const Fp& a);
Fp fp_inv(const Fp& a);
Fp fp_div(const Fp& a, const Fp& b);
Fp fp_pow(const Fp& a, std::uint64_t e);
inline bool fp_is_zero(const Fp& a) { return a.v == 0; }

/// Square root in F_p (Tonelli-Shanks), or nullopt for non-residues.
std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p);

/// Roots in F_p of a univariate polynomial of degree <= 3, listed with
/// multiplicity and sorted. Coefficients ascending (c0 + c1 x + ...).
/// The zero polynomial is rejected.
std::vector<Fp> poly_roots_mod_p(const std::vector<Fp>& coeffs);

/// Monic gcd over F_p[x], coefficients ascending. Zero inputs are
/// handled: gcd(0, g) is g made monic, gcd(0, 0) is the empty vector.
std::vector<Fp> poly_gcd_mod_p(const std::vector<Fp>& a, const std::vector<Fp>& b);

// ---- exact matrices --------------------------------------------------

/// Dense rational matrix with optional row/column labels.
class ExactMatrix {
 public:
  ExactMatrix(std::size_t rows, std::size_t cols);
  static ExactMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  BigRat& at(std::size_t i, std::size_t j);
  const BigRat& at(std::size_t i, std::size_t j) const;

  void set_row_labels(std::vector<std::string> labels);
  void set_col_labels(std::vector<std::string> labels);
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

 private:
  std::size_t rows_, cols_;
  std::vector<BigRat> a_;
  std::vector<std::string> row_labels_, col_labels_;
};

/// Exact determinant via fraction-free Bareiss elimination.
BigRat det_exact(const ExactMatrix& a);

struct RankNullspace {
  std::size_t rank = 0;
  /// Primitive integer vectors spanning the right nullspace, one per free
  /// column, ordered by free column index.
  std::vector<std::vector<BigInt>> basis;
};

/// Exact rank and nullspace basis over Q.
RankNullspace rank_nullspace(const ExactMatrix& a);

}  // namespace cubicount
