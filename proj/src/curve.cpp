#include "cubicount/curve.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubicount {

using u64 = std::uint64_t;

// ---- cubic forms -------------------------------------------------------

const std::array<std::array<int, 3>, 10>& CubicForm::exponents() {
  static const std::array<std::array<int, 3>, 10> e = {{{3, 0, 0},
                                                        {2, 1, 0},
                                                        {2, 0, 1},
                                                        {1, 2, 0},
                                                        {1, 1, 1},
                                                        {1, 0, 2},
                                                        {0, 3, 0},
                                                        {0, 2, 1},
                                                        {0, 1, 2},
                                                        {0, 0, 3}}};
  return e;
}

CubicForm CubicForm::from_coefficients(std::array<BigInt, 10> c) {
  std::vector<BigInt> v(c.begin(), c.end());
  BigInt g = content(v);
  if (g == 0) throw std::invalid_argument("CubicForm: zero form");
  if (g > 1) {
    for (BigInt& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  CubicForm f;
  f.coeffs = std::move(c);
  return f;
}

CubicForm CubicForm::from_monomials(
    const std::vector<std::pair<std::array<int, 3>, BigInt>>& terms) {
  std::array<BigInt, 10> c{};
  const auto& exps = exponents();
  for (const auto& [e, v] : terms) {
    bool found = false;
    for (std::size_t i = 0; i < 10; ++i) {
      if (exps[i] == e) {
        c[i] += v;
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("CubicForm: exponent triple is not cubic");
  }
  return from_coefficients(std::move(c));
}

BigInt CubicForm::coefficient_norm() const {
  BigInt m = 0;
  for (const BigInt& c : coeffs) {
    BigInt a = abs(c);
    if (a > m) m = a;
  }
  return m;
}

std::string CubicForm::to_string() const {
  static const char* names[10] = {"x0^3",   "x0^2*x1", "x0^2*x2", "x0*x1^2", "x0*x1*x2",
                                  "x0*x2^2", "x1^3",    "x1^2*x2", "x1*x2^2", "x2^3"};
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < 10; ++i) {
    if (coeffs[i] == 0) continue;
    if (!first) os << (coeffs[i] > 0 ? " + " : " - ");
    else if (coeffs[i] < 0) os << "-";
    BigInt a = abs(coeffs[i]);
    if (a != 1) os << a.get_str() << "*";
    os << names[i];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---- rational points ----------------------------------------------------

bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.x == b.x; }

bool operator<(const ProjPoint& a, const ProjPoint& b) {
  for (int i = 0; i < 3; ++i) {
    int c = cmp(a.x[i], b.x[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::string ProjPoint::to_string() const {
  std::ostringstream os;
  os << "[" << x[0].get_str() << ":" << x[1].get_str() << ":" << x[2].get_str() << "]";
  return os.str();
}

ProjPoint normalize_point(const std::array<BigInt, 3>& raw) {
  if (raw[0] == 0 && raw[1] == 0 && raw[2] == 0)
    throw std::invalid_argument("normalize_point: zero triple");
  std::vector<BigInt> v(raw.begin(), raw.end());
  make_primitive(v);
  ProjPoint p;
  p.x = {v[0], v[1], v[2]};
  return p;
}

ProjPoint normalize_point(const std::array<BigRat, 3>& raw) {
  BigInt l = 1;
  for (const BigRat& r : raw)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
  std::array<BigInt, 3> ints;
  for (int i = 0; i < 3; ++i) ints[i] = BigRat(raw[i] * BigRat(l)).get_num();
  return normalize_point(ints);
}

BigInt height(const ProjPoint& p) {
  BigInt m = 0;
  for (const BigInt& c : p.x) {
    BigInt a = abs(c);
    if (a > m) m = a;
  }
  return m;
}

BigInt evaluate(const CubicForm& f, const ProjPoint& p) {
  const auto& exps = CubicForm::exponents();
  std::array<std::array<BigInt, 4>, 3> pw;
  for (int i = 0; i < 3; ++i) {
    pw[i][0] = 1;
    for (int k = 1; k <= 3; ++k) pw[i][k] = pw[i][k - 1] * p.x[i];
  }
  BigInt acc = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    if (f.coeffs[i] == 0) continue;
    acc += f.coeffs[i] * pw[0][exps[i][0]] * pw[1][exps[i][1]] * pw[2][exps[i][2]];
  }
  return acc;
}

std::array<BigInt, 3> gradient(const CubicForm& f, const ProjPoint& p) {
  const auto& exps = CubicForm::exponents();
  std::array<std::array<BigInt, 4>, 3> pw;
  for (int i = 0; i < 3; ++i) {
    pw[i][0] = 1;
    for (int k = 1; k <= 3; ++k) pw[i][k] = pw[i][k - 1] * p.x[i];
  }
  std::array<BigInt, 3> g = {BigInt(0), BigInt(0), BigInt(0)};
  for (std::size_t i = 0; i < 10; ++i) {
    if (f.coeffs[i] == 0) continue;
    for (int j = 0; j < 3; ++j) {
      if (exps[i][j] == 0) continue;
      BigInt term = f.coeffs[i] * exps[i][j];
      for (int k = 0; k < 3; ++k) term *= pw[k][exps[i][k] - (k == j ? 1 : 0)];
      g[j] += term;
    }
  }
  return g;
}

// ---- prime-field side ----------------------------------------------------

FpCubic reduce_mod_p(const CubicForm& f, u64 p) {
  FpCubic r;
  r.p = p;
  for (std::size_t i = 0; i < 10; ++i) r.c[i] = fp_from(p, f.coeffs[i]);
  return r;
}

std::array<u64, 3> FpPoint::values() const { return {x[0].v, x[1].v, x[2].v}; }

std::string FpPoint::to_string() const {
  std::ostringstream os;
  os << "[" << x[0].v << ":" << x[1].v << ":" << x[2].v << "]";
  return os.str();
}

bool operator==(const FpPoint& a, const FpPoint& b) {
  return a.x[0] == b.x[0] && a.x[1] == b.x[1] && a.x[2] == b.x[2];
}

bool operator<(const FpPoint& a, const FpPoint& b) {
  if (a.x[0].p != b.x[0].p) return a.x[0].p < b.x[0].p;
  for (int i = 0; i < 3; ++i)
    if (a.x[i].v != b.x[i].v) return a.x[i].v < b.x[i].v;
  return false;
}

FpPoint normalize_fp_point(const std::array<Fp, 3>& raw) {
  for (int i = 0; i < 3; ++i) {
    if (!fp_is_zero(raw[i])) {
      Fp inv = fp_inv(raw[i]);
      FpPoint p;
      for (int k = 0; k < 3; ++k) p.x[k] = raw[k] * inv;
      return p;
    }
  }
  throw std::invalid_argument("normalize_fp_point: zero triple");
}

FpPoint reduce_point_mod_p(const ProjPoint& p, u64 prime) {
  std::array<Fp, 3> raw;
  for (int i = 0; i < 3; ++i) raw[i] = fp_from(prime, p.x[i]);
  return normalize_fp_point(raw);  // primitivity of p guarantees a nonzero coordinate
}

Fp evaluate(const FpCubic& f, const FpPoint& p) {
  const auto& exps = CubicForm::exponents();
  Fp acc = fp_zero(f.p);
  for (std::size_t i = 0; i < 10; ++i) {
    if (fp_is_zero(f.c[i])) continue;
    Fp t = f.c[i];
    for (int k = 0; k < 3; ++k)
      for (int e = 0; e < exps[i][k]; ++e) t = t * p.x[k];
    acc = acc + t;
  }
  return acc;
}

std::array<Fp, 3> gradient(const FpCubic& f, const FpPoint& p) {
  const auto& exps = CubicForm::exponents();
  std::array<Fp, 3> g = {fp_zero(f.p), fp_zero(f.p), fp_zero(f.p)};
  for (std::size_t i = 0; i < 10; ++i) {
    if (fp_is_zero(f.c[i])) continue;
    for (int j = 0; j < 3; ++j) {
      if (exps[i][j] == 0) continue;
      Fp t = f.c[i] * fp_from(f.p, static_cast<u64>(exps[i][j]));
      for (int k = 0; k < 3; ++k) {
        int e = exps[i][k] - (k == j ? 1 : 0);
        for (int q = 0; q < e; ++q) t = t * p.x[k];
      }
      g[j] = g[j] + t;
    }
  }
  return g;
}

// ---- F_p point enumeration and singular scan ------------------------------

namespace {

// Coefficients in z (degree <= 3) of F or of a partial derivative,
// restricted to the pencil (a, b, z). partial = -1 selects F itself.
std::array<Fp, 4> zpoly_at(const FpCubic& f, const Fp& a, const Fp& b, int partial) {
  const auto& exps = CubicForm::exponents();
  std::array<Fp, 4> out = {fp_zero(f.p), fp_zero(f.p), fp_zero(f.p), fp_zero(f.p)};
  for (std::size_t i = 0; i < 10; ++i) {
    if (fp_is_zero(f.c[i])) continue;
    std::array<int, 3> e = exps[i];
    Fp coef = f.c[i];
    if (partial >= 0) {
      if (e[partial] == 0) continue;
      coef = coef * fp_from(f.p, static_cast<u64>(e[partial]));
      e[partial] -= 1;
    }
    Fp t = coef;
    for (int q = 0; q < e[0]; ++q) t = t * a;
    for (int q = 0; q < e[1]; ++q) t = t * b;
    out[e[2]] = out[e[2]] + t;
  }
  return out;
}

bool all_zero(const std::array<Fp, 4>& v) {
  return fp_is_zero(v[0]) && fp_is_zero(v[1]) && fp_is_zero(v[2]) && fp_is_zero(v[3]);
}

std::vector<Fp> to_vec(const std::array<Fp, 4>& v) {
  return std::vector<Fp>(v.begin(), v.end());
}

std::vector<u64> distinct_roots(const std::array<Fp, 4>& poly) {
  std::vector<u64> out;
  if (all_zero(poly)) return out;
  for (const Fp& r : poly_roots_mod_p(to_vec(poly))) {
    if (out.empty() || out.back() != r.v) out.push_back(r.v);
  }
  return out;
}

bool is_singular_at(const FpCubic& f, const FpPoint& pt) {
  if (!fp_is_zero(evaluate(f, pt))) return false;
  auto g = gradient(f, pt);
  return fp_is_zero(g[0]) && fp_is_zero(g[1]) && fp_is_zero(g[2]);
}

// Singular candidates along one pencil (a, b, z): common zeros of the
// three partials (and of F itself when p = 3, where Euler's relation is
// vacuous).
std::optional<FpPoint> scan_pencil(const FpCubic& f, const Fp& a, const Fp& b) {
  const u64 p = f.p;
  std::array<Fp, 4> d0 = zpoly_at(f, a, b, 0);
  std::array<Fp, 4> d1 = zpoly_at(f, a, b, 1);
  std::array<Fp, 4> d2 = zpoly_at(f, a, b, 2);
  std::vector<Fp> g;
  for (const auto& q : {d0, d1, d2}) {
    if (!all_zero(q)) g = poly_gcd_mod_p(g, to_vec(q));
  }
  if (p == 3) {
    std::array<Fp, 4> f0 = zpoly_at(f, a, b, -1);
    if (!all_zero(f0)) g = poly_gcd_mod_p(g, to_vec(f0));
  }

  std::vector<u64> candidates;
  if (g.empty()) {
    // every partial vanishes identically along the pencil
    std::array<Fp, 4> f0 = zpoly_at(f, a, b, -1);
    if (all_zero(f0)) {
      candidates.push_back(0);  // the whole pencil lies on the curve, singular
    } else {
      candidates = distinct_roots(f0);
    }
  } else if (g.size() > 1) {
    std::array<Fp, 4> ga = {fp_zero(p), fp_zero(p), fp_zero(p), fp_zero(p)};
    for (std::size_t i = 0; i < g.size() && i < 4; ++i) ga[i] = g[i];
    candidates = distinct_roots(ga);
  }
  for (u64 z : candidates) {
    FpPoint pt = normalize_fp_point({a, b, fp_from(p, z)});
    if (is_singular_at(f, pt)) return pt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<FpPoint> fp_singular_point(const FpCubic& f) {
  const u64 p = f.p;
  for (u64 y = 0; y < p; ++y) {
    auto w = scan_pencil(f, fp_one(p), fp_from(p, y));
    if (w) return w;
  }
  auto w = scan_pencil(f, fp_zero(p), fp_one(p));
  if (w) return w;
  FpPoint inf;
  inf.x = {fp_zero(p), fp_zero(p), fp_one(p)};
  if (is_singular_at(f, inf)) return inf;
  return std::nullopt;
}

bool good_reduction(const CubicForm& f, u64 p) {
  return !fp_singular_point(reduce_mod_p(f, p)).has_value();
}

std::vector<FpPoint> enumerate_points_fp(const FpCubic& f) {
  const u64 p = f.p;
  std::vector<FpPoint> out;
  auto push_line = [&](const Fp& a, const Fp& b) {
    std::array<Fp, 4> zp = zpoly_at(f, a, b, -1);
    if (all_zero(zp)) {
      // degenerate reduction containing the whole pencil
      for (u64 z = 0; z < p; ++z) {
        FpPoint pt;
        pt.x = {a, b, fp_from(p, z)};
        out.push_back(pt);
      }
      return;
    }
    for (u64 z : distinct_roots(zp)) {
      FpPoint pt;
      pt.x = {a, b, fp_from(p, z)};
      out.push_back(pt);
    }
  };
  for (u64 y = 0; y < p; ++y) push_line(fp_one(p), fp_from(p, y));
  push_line(fp_zero(p), fp_one(p));
  if (fp_is_zero(f.c[9])) {
    FpPoint pt;
    pt.x = {fp_zero(p), fp_zero(p), fp_one(p)};
    out.push_back(pt);
  }
  return out;
}

std::uint64_t count_points_fp(const CubicForm& f, u64 p) {
  if (!good_reduction(f, p))
    throw std::domain_error("count_points_fp: bad reduction at p = " + std::to_string(p));
  return enumerate_points_fp(reduce_mod_p(f, p)).size();
}

// ---- smoothness ----------------------------------------------------------

namespace {

int nonzero_count(const ProjPoint& p) {
  int n = 0;
  for (const auto& c : p.x)
    if (c != 0) ++n;
  return n;
}

// Normalized primitive points ordered by height, then by sparsity, then
// lexicographically descending. Simple singular points come first.
std::vector<ProjPoint> small_points_for_singular_search(long hmax) {
  std::vector<ProjPoint> out;
  for (long h = 1; h <= hmax; ++h) {
    std::vector<ProjPoint> layer;
    for (long a = 0; a <= h; ++a) {
      for (long b = -h; b <= h; ++b) {
        for (long c = -h; c <= h; ++c) {
          long m = std::max({std::abs(a), std::abs(b), std::abs(c)});
          if (m != h) continue;
          if (a == 0 && b < 0) continue;
          if (a == 0 && b == 0 && c < 0) continue;
          if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
          ProjPoint p;
          p.x = {BigInt(a), BigInt(b), BigInt(c)};
          layer.push_back(p);
        }
      }
    }
    std::sort(layer.begin(), layer.end(), [](const ProjPoint& u, const ProjPoint& v) {
      int nu = nonzero_count(u), nv = nonzero_count(v);
      if (nu != nv) return nu < nv;
      return v < u;  // lexicographically descending
    });
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

}  // namespace

std::string SmoothnessVerdict::to_string() const {
  switch (kind) {
    case Kind::SmoothCertified:
      return "SmoothCertified(" + std::to_string(witness_prime) + ")";
    case Kind::SingularCertified:
      return "SingularCertified(" + singular_point->to_string() + ")";
    default:
      return "Undetermined";
  }
}

SmoothnessVerdict smoothness_verdict(const CubicForm& f, int prime_budget) {
  SmoothnessVerdict v;
  for (const ProjPoint& p : small_points_for_singular_search(12)) {
    if (evaluate(f, p) != 0) continue;
    auto g = gradient(f, p);
    if (g[0] == 0 && g[1] == 0 && g[2] == 0) {
      v.kind = SmoothnessVerdict::Kind::SingularCertified;
      v.singular_point = p;
      return v;
    }
  }
  // witness primes start at 5: the tiny fields F_2, F_3 are poor proxies
  // for nonsingularity of the reduction
  u64 p = 5;
  for (int tried = 0; tried < prime_budget; ++tried) {
    if (good_reduction(f, p)) {
      v.kind = SmoothnessVerdict::Kind::SmoothCertified;
      v.witness_prime = p;
      return v;
    }
    p = next_prime_after(p);
  }
  v.kind = SmoothnessVerdict::Kind::Undetermined;
  return v;
}

ReductionProfile reduction_profile(const CubicForm& f, u64 prime_bound) {
  if (prime_bound > 1000000)
    throw std::invalid_argument("reduction_profile: prime bound too large");
  ReductionProfile r;
  r.curve = f;
  r.scan_bound = prime_bound;
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(prime_bound))) {
    auto w = fp_singular_point(reduce_mod_p(f, p));
    if (w) {
      r.bad_primes.push_back(p);
      r.witnesses.push_back(*w);
      r.pi_c *= p;
    }
  }
  return r;
}

// ---- rational point enumeration -------------------------------------------

namespace {

int sign_of(const BigInt& x) { return mpz_sgn(x.get_mpz_t()); }

// Exact floor of (a + sqrt(disc)) / den or (a - sqrt(disc)) / den,
// disc >= 0, den != 0.
BigInt floor_root_expr(BigInt a, const BigInt& disc, bool plus, BigInt den) {
  if (den < 0) {
    a = -a;
    den = -den;
    plus = !plus;
  }
  BigInt u;
  mpz_sqrt(u.get_mpz_t(), disc.get_mpz_t());
  BigInt q;
  if (!plus) {
    BigInt num = a - u - 1;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    while (true) {
      BigInt w = a - (q + 1) * den;
      if (w >= 0 && w * w >= disc) q += 1;
      else break;
    }
  } else {
    BigInt num = a + u;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    while (true) {
      BigInt w = (q + 1) * den - a;
      if (w <= 0 || w * w <= disc) q += 1;
      else break;
    }
  }
  return q;
}

// Integer roots of c3 z^3 + c2 z^2 + c1 z + c0 within [-B, B], exact.
void integer_roots_in_range(const BigInt& c3, const BigInt& c2, const BigInt& c1,
                            const BigInt& c0, long B, std::vector<long>& out) {
  if (c3 == 0) {
    if (c2 == 0) {
      if (c1 == 0) {
        if (c0 == 0)
          throw std::domain_error("integer_roots_in_range: identically zero restriction");
        return;
      }
      if (mpz_divisible_p(c0.get_mpz_t(), c1.get_mpz_t())) {
        BigInt z = -c0 / c1;
        if (abs(z) <= B) out.push_back(z.get_si());
      }
      return;
    }
    BigInt disc = c1 * c1 - 4 * c2 * c0;
    if (disc < 0) return;
    if (!mpz_perfect_square_p(disc.get_mpz_t())) return;
    BigInt u;
    mpz_sqrt(u.get_mpz_t(), disc.get_mpz_t());
    BigInt den = 2 * c2;
    for (const BigInt& num : {BigInt(-c1 + u), BigInt(-c1 - u)}) {
      if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
        BigInt z = num / den;
        if (abs(z) <= B) out.push_back(z.get_si());
      }
    }
    return;
  }

  auto eval_sign = [&](long z) -> int {
    BigInt acc = c3;
    acc = acc * z + c2;
    acc = acc * z + c1;
    acc = acc * z + c0;
    return sign_of(acc);
  };
  auto segment = [&](long lo, long hi) {
    if (lo > hi) return;
    int slo = eval_sign(lo);
    if (slo == 0) {
      out.push_back(lo);
      return;
    }
    int shi = eval_sign(hi);
    if (shi == 0) {
      out.push_back(hi);
      return;
    }
    if (slo == shi) return;
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      int sm = eval_sign(mid);
      if (sm == 0) {
        out.push_back(mid);
        return;
      }
      if (sm == slo) lo = mid;
      else hi = mid;
    }
  };
  auto seg_clamped = [&](BigInt lo, BigInt hi) {
    if (lo < -B) lo = -B;
    if (hi > B) hi = B;
    if (lo > hi) return;
    segment(lo.get_si(), hi.get_si());
  };

  BigInt d = c2 * c2 - 3 * c3 * c1;  // discriminant of the derivative / 4
  if (d <= 0) {
    segment(-B, B);  // monotone on all of R
  } else {
    BigInt den = 3 * c3;
    BigInt fa = floor_root_expr(-c2, d, false, den);
    BigInt fb = floor_root_expr(-c2, d, true, den);
    BigInt ca = -floor_root_expr(c2, d, true, den);
    BigInt cb = -floor_root_expr(c2, d, false, den);
    if (fa > fb) {  // c3 < 0 swaps the critical points
      std::swap(fa, fb);
      std::swap(ca, cb);
    }
    seg_clamped(BigInt(-B), fa);
    seg_clamped(ca, fb);
    seg_clamped(cb, BigInt(B));
  }
}

}  // namespace

std::vector<ProjPoint> enumerate_rational_points(const CubicForm& f, const BigInt& B_in) {
  if (B_in < 1) throw std::invalid_argument("enumerate_rational_points: B must be >= 1");
  if (B_in > 1000000)
    throw std::invalid_argument("enumerate_rational_points: B too large for the sweep");
  const long B = B_in.get_si();
  const auto& exps = CubicForm::exponents();

  std::vector<ProjPoint> out;
  auto push_checked = [&](long x0, long x1, long x2) {
    long g = std::gcd(std::gcd(std::abs(x0), std::abs(x1)), std::abs(x2));
    if (g != 1) return;
    ProjPoint p;
    p.x = {BigInt(x0), BigInt(x1), BigInt(x2)};
    if (evaluate(f, p) != 0)
      throw std::logic_error("enumerate_rational_points: root verification failed");
    out.push_back(std::move(p));
  };

  std::vector<long> roots;
  std::array<BigInt, 4> c;
  std::array<BigInt, 4> x0p, x1p;
  auto solve_pair = [&](long x0, long x1) {
    x1p[0] = 1;
    for (int k = 1; k <= 3; ++k) x1p[k] = x1p[k - 1] * x1;
    for (auto& v : c) v = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      if (f.coeffs[i] == 0) continue;
      c[exps[i][2]] += f.coeffs[i] * x0p[exps[i][0]] * x1p[exps[i][1]];
    }
    roots.clear();
    integer_roots_in_range(c[3], c[2], c[1], c[0], B, roots);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (long z : roots) push_checked(x0, x1, z);
  };

  if (f.coeffs[9] == 0) push_checked(0, 0, 1);
  x0p[0] = 1;
  for (int k = 1; k <= 3; ++k) x0p[k] = 0;
  for (long x1 = 1; x1 <= B; ++x1) solve_pair(0, x1);
  for (long x0 = 1; x0 <= B; ++x0) {
    x0p[0] = 1;
    for (int k = 1; k <= 3; ++k) x0p[k] = x0p[k - 1] * x0;
    for (long x1 = -B; x1 <= B; ++x1) solve_pair(x0, x1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cubicount
