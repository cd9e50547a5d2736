#include "cubicount/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace cubicount {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

BigRat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

BigInt pow_ui(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

BigInt content(const std::vector<BigInt>& v) {
  BigInt g = 0;
  for (const BigInt& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void make_primitive(std::vector<BigInt>& v) {
  BigInt g = content(v);
  if (g == 0) return;
  if (g > 1) {
    for (BigInt& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  for (const BigInt& x : v) {
    if (x != 0) {
      if (x < 0) {
        for (BigInt& y : v) y = -y;
      }
      return;
    }
  }
}

// ---- primes ----------------------------------------------------------

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = m == 1 ? 0 : 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  // deterministic witness set for n < 2^64
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

u64 next_prime_after(u64 n) {
  u64 c = n + 1;
  if (c <= 2) return 2;
  if (c % 2 == 0) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> sieve(limit + 1, true);
  sieve[0] = sieve[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (sieve[i]) {
      for (std::uint64_t j = i * i; j <= limit; j += i) sieve[j] = false;
    }
  }
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (sieve[i]) out.push_back(i);
  }
  return out;
}

long valuation(const BigInt& n, u64 p) {
  if (n == 0) throw std::domain_error("valuation: undefined for n = 0");
  BigInt pp(static_cast<unsigned long>(p));
  BigInt rest;
  mp_bitcnt_t k = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
  return static_cast<long>(k);
}

long valuation(const BigRat& r, u64 p) {
  if (r == 0) throw std::domain_error("valuation: undefined for 0");
  return valuation(BigInt(r.get_num()), p) - valuation(BigInt(r.get_den()), p);
}

// ---- prime field -----------------------------------------------------

namespace {

void check_modulus(u64 p) {
  if (p < 2) throw std::invalid_argument("Fp: modulus must be >= 2");
}

void check_same(const Fp& a, const Fp& b) {
  if (a.p != b.p || a.p < 2)
    throw std::invalid_argument("Fp: mixed or invalid moduli");
}

}  // namespace

Fp fp_from(u64 p, u64 value) {
  check_modulus(p);
  return Fp{value % p, p};
}

Fp fp_from(u64 p, std::int64_t value) {
  check_modulus(p);
  std::int64_t r = value % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  return Fp{static_cast<u64>(r), p};
}

Fp fp_from(u64 p, const BigInt& value) {
  check_modulus(p);
  return Fp{mpz_fdiv_ui(value.get_mpz_t(), p), p};
}

bool operator==(const Fp& a, const Fp& b) { return a.p == b.p && a.v == b.v; }

Fp operator+(const Fp& a, const Fp& b) {
  check_same(a, b);
  u64 s = a.v + b.v;
  if (s >= a.p) s -= a.p;
  return Fp{s, a.p};
}

Fp operator-(const Fp& a, const Fp& b) {
  check_same(a, b);
  return Fp{a.v >= b.v ? a.v - b.v : a.v + (a.p - b.v), a.p};
}

Fp operator*(const Fp& a, const Fp& b) {
  check_same(a, b);
  return Fp{mulmod_u64(a.v, b.v, a.p), a.p};
}

Fp operator-(const Fp& a) {
  check_modulus(a.p);
  return Fp{a.v == 0 ? 0 : a.p - a.v, a.p};
}

Fp fp_inv(const Fp& a) {
  check_modulus(a.p);
  if (a.v == 0) throw std::domain_error("fp_inv: inverse of zero");
  // extended Euclid on signed values
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(a.p), newr = static_cast<std::int64_t>(a.v);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt; newt = tmp;
    tmp = r - q * newr;
    r = newr; newr = tmp;
  }
  if (r != 1) throw std::domain_error("fp_inv: modulus not prime");
  if (t < 0) t += static_cast<std::int64_t>(a.p);
  return Fp{static_cast<u64>(t), a.p};
}

Fp fp_div(const Fp& a, const Fp& b) {
  check_same(a, b);
  return a * fp_inv(b);
}

Fp fp_pow(const Fp& a, u64 e) {
  check_modulus(a.p);
  return Fp{powmod_u64(a.v, e, a.p), a.p};
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (p == 2) return a;
  if (a == 0) return 0;
  if (powmod_u64(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) { q >>= 1; ++s; }
  u64 z = 2;
  while (powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = s;
  u64 c = powmod_u64(z, q, p);
  u64 t = powmod_u64(a, q, p);
  u64 r = powmod_u64(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 t2 = t;
    u64 i = 0;
    while (t2 != 1) { t2 = mulmod_u64(t2, t2, p); ++i; }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, p);
    m = i;
    c = mulmod_u64(b, b, p);
    t = mulmod_u64(t, c, p);
    r = mulmod_u64(r, b, p);
  }
  return r;
}

// ---- polynomial roots over F_p ----------------------------------------

namespace {

// Dense polynomials over F_p, coefficients ascending, always trimmed.
using Poly = std::vector<u64>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

u64 poly_eval(const Poly& f, u64 x, u64 p) {
  u64 acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = (mulmod_u64(acc, x, p) + f[i]) % p;
  return acc;
}

Poly poly_mul(const Poly& f, const Poly& g, u64 p) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j)
      h[i + j] = (h[i + j] + (u128)f[i] * g[j]) % p;
  }
  trim(h);
  return h;
}

// f mod g, g nonzero
Poly poly_rem(Poly f, const Poly& g, u64 p) {
  trim(f);
  u64 lead_inv = powmod_u64(g.back(), p - 2, p);
  while (f.size() >= g.size()) {
    u64 c = mulmod_u64(f.back(), lead_inv, p);
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      u64 sub = mulmod_u64(c, g[i], p);
      u64& t = f[shift + i];
      t = t >= sub ? t - sub : t + (p - sub);
    }
    trim(f);
    if (f.empty()) break;
  }
  return f;
}

Poly poly_monic(Poly f, u64 p) {
  trim(f);
  if (f.empty() || f.back() == 1) return f;
  u64 inv = powmod_u64(f.back(), p - 2, p);
  for (u64& c : f) c = mulmod_u64(c, inv, p);
  return f;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a, p);
}

// exact division f / g (remainder known zero)
Poly poly_quot(Poly f, const Poly& g, u64 p) {
  trim(f);
  if (f.empty()) return {};
  Poly q(f.size() - g.size() + 1, 0);
  u64 lead_inv = powmod_u64(g.back(), p - 2, p);
  while (f.size() >= g.size()) {
    u64 c = mulmod_u64(f.back(), lead_inv, p);
    std::size_t shift = f.size() - g.size();
    q[shift] = c;
    for (std::size_t i = 0; i < g.size(); ++i) {
      u64 sub = mulmod_u64(c, g[i], p);
      u64& t = f[shift + i];
      t = t >= sub ? t - sub : t + (p - sub);
    }
    trim(f);
    if (f.empty()) break;
  }
  return q;
}

// x^e mod f, f of degree >= 1
Poly poly_xpow_mod(u64 e, const Poly& f, u64 p) {
  Poly r{1};
  Poly x{0, 1};
  if (f.size() <= 1) throw std::logic_error("poly_xpow_mod: constant modulus");
  Poly base = poly_rem(x, f, p);
  while (e) {
    if (e & 1) r = poly_rem(poly_mul(r, base, p), f, p);
    base = poly_rem(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

// (x + d)^e mod f
Poly poly_shiftpow_mod(u64 d, u64 e, const Poly& f, u64 p) {
  Poly r{1};
  Poly base = poly_rem(Poly{d % p, 1}, f, p);
  while (e) {
    if (e & 1) r = poly_rem(poly_mul(r, base, p), f, p);
    base = poly_rem(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

// distinct roots of a monic polynomial known to split into distinct
// linear factors over F_p (p > 3)
void split_roots(const Poly& w, u64 p, std::vector<u64>& out) {
  int d = degree(w);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back((p - w[0]) % p);
    return;
  }
  if (d == 2) {
    // x^2 + bx + c, disc is a nonzero square by assumption
    u64 b = w[1], c = w[0];
    u64 disc = (mulmod_u64(b, b, p) + p - mulmod_u64(4 % p, c, p) % p) % p;
    auto s = sqrt_mod(disc, p);
    if (!s) throw std::logic_error("split_roots: quadratic does not split");
    u64 inv2 = powmod_u64(2, p - 2, p);
    u64 nb = (p - b) % p;
    out.push_back(mulmod_u64((nb + *s) % p, inv2, p));
    out.push_back(mulmod_u64((nb + p - *s) % p, inv2, p));
    return;
  }
  // cubic: deterministic delta sweep splits it
  for (u64 delta = 0; delta < p; ++delta) {
    Poly t = poly_shiftpow_mod(delta, (p - 1) / 2, w, p);
    // t - 1
    if (t.empty()) t = Poly{p - 1};
    else t[0] = t[0] == 1 ? 0 : (t[0] + p - 1) % p;
    trim(t);
    if (t.empty()) continue;  // (x+delta)^((p-1)/2) == 1 mod w
    Poly g = poly_gcd(w, t, p);
    int dg = degree(g);
    if (dg > 0 && dg < d) {
      split_roots(g, p, out);
      split_roots(poly_quot(w, g, p), p, out);
      return;
    }
  }
  throw std::logic_error("split_roots: sweep failed to split cubic");
}

}  // namespace

std::vector<Fp> poly_roots_mod_p(const std::vector<Fp>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("poly_roots_mod_p: empty polynomial");
  u64 p = coeffs[0].p;
  check_modulus(p);
  Poly f;
  f.reserve(coeffs.size());
  for (const Fp& c : coeffs) {
    if (c.p != p) throw std::invalid_argument("poly_roots_mod_p: mixed moduli");
    f.push_back(c.v % p);
  }
  trim(f);
  if (f.empty()) throw std::invalid_argument("poly_roots_mod_p: zero polynomial");
  if (degree(f) > 3) throw std::invalid_argument("poly_roots_mod_p: degree > 3");

  std::vector<u64> roots;
  if (p <= 3 || degree(f) == 1) {
    if (degree(f) == 1) {
      roots.push_back(mulmod_u64((p - f[0]) % p, powmod_u64(f[1], p - 2, p), p));
    } else {
      for (u64 x = 0; x < p; ++x) {
        if (poly_eval(f, x, p) == 0) roots.push_back(x);
      }
    }
  } else if (degree(f) >= 2) {
    // distinct-root part: gcd(f, x^p - x)
    Poly xp = poly_xpow_mod(p, f, p);
    // xp - x
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = diff[1] >= 1 ? diff[1] - 1 : p - 1;
    trim(diff);
    Poly w = diff.empty() ? poly_monic(f, p) : poly_gcd(f, diff, p);
    split_roots(w, p, roots);
  }

  // multiplicities by synthetic division
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  std::vector<Fp> out;
  for (u64 r : roots) {
    Poly g = f;
    while (!g.empty() && poly_eval(g, r, p) == 0) {
      out.push_back(Fp{r, p});
      // synthetic division by (x - r); remainder is zero by the eval check
      Poly q(g.size() - 1, 0);
      u64 carry = 0;
      for (std::size_t i = g.size(); i-- > 1;) {
        carry = (mulmod_u64(carry, r, p) + g[i]) % p;
        q[i - 1] = carry;
      }
      g = std::move(q);
      trim(g);
    }
  }
  std::sort(out.begin(), out.end(), [](const Fp& a, const Fp& b) { return a.v < b.v; });
  return out;
}

std::vector<Fp> poly_gcd_mod_p(const std::vector<Fp>& a, const std::vector<Fp>& b) {
  u64 p = 0;
  for (const Fp& c : a) { p = c.p; break; }
  if (p == 0)
    for (const Fp& c : b) { p = c.p; break; }
  if (p == 0) return {};
  check_modulus(p);
  Poly fa, fb;
  for (const Fp& c : a) {
    if (c.p != p) throw std::invalid_argument("poly_gcd_mod_p: mixed moduli");
    fa.push_back(c.v % p);
  }
  for (const Fp& c : b) {
    if (c.p != p) throw std::invalid_argument("poly_gcd_mod_p: mixed moduli");
    fb.push_back(c.v % p);
  }
  trim(fa);
  trim(fb);
  Poly g = fa.empty() ? poly_monic(fb, p) : (fb.empty() ? poly_monic(fa, p) : poly_gcd(fa, fb, p));
  std::vector<Fp> out;
  for (u64 c : g) out.push_back(Fp{c, p});
  return out;
}

// ---- exact matrices --------------------------------------------------

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, BigRat(0)) {}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

BigRat& ExactMatrix::at(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("ExactMatrix::at");
  return a_[i * cols_ + j];
}

const BigRat& ExactMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("ExactMatrix::at");
  return a_[i * cols_ + j];
}

void ExactMatrix::set_row_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != rows_)
    throw std::invalid_argument("ExactMatrix: row label count mismatch");
  row_labels_ = std::move(labels);
}

void ExactMatrix::set_col_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != cols_)
    throw std::invalid_argument("ExactMatrix: column label count mismatch");
  col_labels_ = std::move(labels);
}

namespace {

// Clear denominators row by row. Returns the product of the row scales.
BigInt scale_rows(const ExactMatrix& a, std::vector<std::vector<BigInt>>& m) {
  const std::size_t r = a.rows(), c = a.cols();
  m.assign(r, std::vector<BigInt>(c));
  BigInt total = 1;
  for (std::size_t i = 0; i < r; ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < c; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.at(i, j).get_den().get_mpz_t());
    for (std::size_t j = 0; j < c; ++j) {
      BigRat scaled = a.at(i, j) * BigRat(l);
      m[i][j] = scaled.get_num();  // denominator is 1 after scaling
    }
    total *= l;
  }
  return total;
}

}  // namespace

BigRat det_exact(const ExactMatrix& a) {
  if (!a.square()) throw std::invalid_argument("det_exact: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return BigRat(1);
  std::vector<std::vector<BigInt>> m;
  BigInt denom = scale_rows(a, m);

  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return BigRat(0);
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  BigInt det = m[n - 1][n - 1];
  if (sign < 0) det = -det;
  return make_rat(det, denom);
}

RankNullspace rank_nullspace(const ExactMatrix& a) {
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<std::vector<BigInt>> m;
  scale_rows(a, m);  // row scaling changes neither rank nor nullspace

  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  BigInt prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t pr = row;
    while (pr < r && m[pr][col] == 0) ++pr;
    if (pr == r) continue;
    std::swap(m[row], m[pr]);
    for (std::size_t i = row + 1; i < r; ++i) {
      for (std::size_t j = col + 1; j < c; ++j) {
        BigInt t = m[row][col] * m[i][j] - m[i][col] * m[row][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][col] = 0;
    }
    prev = m[row][col];
    pivots.emplace_back(row, col);
    ++row;
  }

  RankNullspace out;
  out.rank = pivots.size();
  std::vector<bool> is_pivot_col(c, false);
  for (auto& [pr, pc] : pivots) is_pivot_col[pc] = true;

  for (std::size_t f = 0; f < c; ++f) {
    if (is_pivot_col[f]) continue;
    std::vector<BigRat> x(c, BigRat(0));
    x[f] = 1;
    for (std::size_t i = pivots.size(); i-- > 0;) {
      auto [pr, pc] = pivots[i];
      BigRat s(0);
      for (std::size_t j = pc + 1; j < c; ++j) {
        if (m[pr][j] != 0 && x[j] != 0) s += BigRat(m[pr][j]) * x[j];
      }
      x[pc] = -s / BigRat(m[pr][pc]);
    }
    BigInt l = 1;
    for (std::size_t j = 0; j < c; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x[j].get_den().get_mpz_t());
    std::vector<BigInt> v(c);
    for (std::size_t j = 0; j < c; ++j) v[j] = BigRat(x[j] * BigRat(l)).get_num();
    make_primitive(v);
    out.basis.push_back(std::move(v));
  }
  return out;
}

}  // namespace cubicount
