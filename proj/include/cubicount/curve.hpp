/**
 * @file curve.hpp
 * @brief Ternary cubic forms: smoothness and reduction tests, naive
 *        height, rational point enumeration, and F_p point counting.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubicount/arith.hpp"

namespace cubicount {

/// Primitive integral ternary cubic form. Coefficients are stored in the
/// fixed monomial order
///   (3,0,0),(2,1,0),(2,0,1),(1,2,0),(1,1,1),(1,0,2),(0,3,0),(0,2,1),(0,1,2),(0,0,3).
struct CubicForm {
  std::array<BigInt, 10> coeffs{};

  static const std::array<std::array<int, 3>, 10>& exponents();

  /// Content-normalizes (gcd of coefficients becomes 1, sign preserved).
  /// The zero form is rejected.
  static CubicForm from_coefficients(std::array<BigInt, 10> c);

  /// Build from sparse (exponent triple, coefficient) terms.
  static CubicForm from_monomials(
      const std::vector<std::pair<std::array<int, 3>, BigInt>>& terms);

  BigInt coefficient_norm() const;  // max |c_i|
  std::string to_string() const;
};

/// Projective rational point, stored as a primitive integer triple with
/// the first nonzero coordinate positive. Never (0,0,0).
struct ProjPoint {
  std::array<BigInt, 3> x{};

  std::string to_string() const;  // "[x0:x1:x2]"
};

bool operator==(const ProjPoint& a, const ProjPoint& b);
inline bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }
bool operator<(const ProjPoint& a, const ProjPoint& b);  // lexicographic

/// Unique normalized representative of a projective point. Zero triples
/// are rejected.
ProjPoint normalize_point(const std::array<BigRat, 3>& raw);
ProjPoint normalize_point(const std::array<BigInt, 3>& raw);

/// Naive height max(|x0|,|x1|,|x2|) of a normalized point.
BigInt height(const ProjPoint& p);

BigInt evaluate(const CubicForm& f, const ProjPoint& p);
std::array<BigInt, 3> gradient(const CubicForm& f, const ProjPoint& p);

// ---- prime-field side --------------------------------------------------

/// Cubic form with coefficients reduced into F_p.
struct FpCubic {
  std::array<Fp, 10> c{};
  std::uint64_t p = 0;
};

FpCubic reduce_mod_p(const CubicForm& f, std::uint64_t p);

/// Projective point over F_p, normalized so the first nonzero coordinate
/// is 1.
struct FpPoint {
  std::array<Fp, 3> x{};

  std::array<std::uint64_t, 3> values() const;
  std::string to_string() const;
};

bool operator==(const FpPoint& a, const FpPoint& b);
inline bool operator!=(const FpPoint& a, const FpPoint& b) { return !(a == b); }
bool operator<(const FpPoint& a, const FpPoint& b);

FpPoint normalize_fp_point(const std::array<Fp, 3>& raw);
FpPoint reduce_point_mod_p(const ProjPoint& p, std::uint64_t prime);

Fp evaluate(const FpCubic& f, const FpPoint& p);
std::array<Fp, 3> gradient(const FpCubic& f, const FpPoint& p);

// ---- smoothness and reduction -------------------------------------------

struct SmoothnessVerdict {
  enum class Kind { SmoothCertified, SingularCertified, Undetermined };
  Kind kind = Kind::Undetermined;
  std::uint64_t witness_prime = 0;           // SmoothCertified
  std::optional<ProjPoint> singular_point;   // SingularCertified
  std::string to_string() const;
};

/// Certify smoothness by exhibiting a prime p >= 5 whose reduction has no
/// F_p-rational singular point, or singularity by a rational singular
/// point of small height. `prime_budget` caps the number of witness
/// primes tried.
SmoothnessVerdict smoothness_verdict(const CubicForm& f, int prime_budget = 25);

/// True iff the reduction mod p has no F_p-rational point where F and all
/// three partials vanish.
bool good_reduction(const CubicForm& f, std::uint64_t p);

/// Witness for bad reduction, if any.
std::optional<FpPoint> fp_singular_point(const FpCubic& f);

/// All points of the reduced curve, deterministic order (charts x0=1,
/// then x0=0,x1=1, then [0:0:1]).
std::vector<FpPoint> enumerate_points_fp(const FpCubic& f);

/// Exact n_p for a good prime; throws on bad reduction.
std::uint64_t count_points_fp(const CubicForm& f, std::uint64_t p);

struct ReductionProfile {
  CubicForm curve;
  std::uint64_t scan_bound = 0;
  std::vector<std::uint64_t> bad_primes;  // sorted
  std::vector<FpPoint> witnesses;         // parallel to bad_primes
  BigInt pi_c = 1;                        // product of the bad primes found
};

/// Scan-limited bad-prime profile: every listed prime carries an explicit
/// singular witness point. pi_c is a certified lower factor of the true
/// product of bad primes.
ReductionProfile reduction_profile(const CubicForm& f, std::uint64_t prime_bound);

// ---- rational points ----------------------------------------------------

/// All normalized rational points with height <= B, sorted
/// lexicographically. B must be >= 1 (and is capped at 10^6; the sweep is
/// quadratic in B). The form is assumed smooth.
std::vector<ProjPoint> enumerate_rational_points(const CubicForm& f, const BigInt& B);

}  // namespace cubicount
