#include "cubicount/group.hpp"

#include <stdexcept>

namespace cubicount {

namespace {

// small overload set so the line geometry can run over Z or over F_p
inline BigInt k_add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt k_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt k_neg(const BigInt& a) { return -a; }
inline bool k_is_zero(const BigInt& a) { return a == 0; }
inline Fp k_add(const Fp& a, const Fp& b) { return a + b; }
inline Fp k_mul(const Fp& a, const Fp& b) { return a * b; }
inline Fp k_neg(const Fp& a) { return -a; }
inline bool k_is_zero(const Fp& a) { return fp_is_zero(a); }

template <class K>
using Triple = std::array<K, 3>;

template <class K>
bool proportional(const Triple<K>& a, const Triple<K>& b) {
  return k_is_zero(k_add(k_mul(a[1], b[2]), k_neg(k_mul(a[2], b[1])))) &&
         k_is_zero(k_add(k_mul(a[2], b[0]), k_neg(k_mul(a[0], b[2])))) &&
         k_is_zero(k_add(k_mul(a[0], b[1]), k_neg(k_mul(a[1], b[0]))));
}

// product of binary forms, coefficient vectors ascending in t
template <class K>
std::vector<K> bin_mul(const std::vector<K>& f, const std::vector<K>& g, const K& zero) {
  std::vector<K> h(f.size() + g.size() - 1, zero);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (k_is_zero(f[i])) continue;
    for (std::size_t j = 0; j < g.size(); ++j)
      h[i + j] = k_add(h[i + j], k_mul(f[i], g[j]));
  }
  return h;
}

// [A,B,C,D]: coefficients of s^3, s^2 t, s t^2, t^3 in F(sP + tT)
template <class K>
std::array<K, 4> restrict_to_line(const std::array<K, 10>& coeffs, const Triple<K>& p,
                                  const Triple<K>& t, const K& zero) {
  const auto& exps = CubicForm::exponents();
  std::array<K, 4> out = {zero, zero, zero, zero};
  for (std::size_t i = 0; i < 10; ++i) {
    if (k_is_zero(coeffs[i])) continue;
    std::vector<K> prod{coeffs[i]};
    for (int k = 0; k < 3; ++k) {
      std::vector<K> lin{p[k], t[k]};
      for (int e = 0; e < exps[i][k]; ++e) prod = bin_mul(prod, lin, zero);
    }
    for (int j = 0; j < 4; ++j) out[j] = k_add(out[j], prod[j]);
  }
  return out;
}

// a direction spanning the tangent line at P together with P itself:
// any kernel vector of the gradient that is not proportional to P
template <class K>
Triple<K> tangent_direction(const Triple<K>& grad, const Triple<K>& p, const K& zero) {
  int i = -1;
  for (int k = 0; k < 3; ++k) {
    if (!k_is_zero(grad[k])) { i = k; break; }
  }
  if (i < 0) throw std::domain_error("third_intersection: singular point, no tangent line");
  for (int j = 0; j < 3; ++j) {
    if (j == i) continue;
    Triple<K> v = {zero, zero, zero};
    v[i] = k_neg(grad[j]);
    v[j] = grad[i];
    if (!proportional(v, p)) return v;
  }
  throw std::logic_error("third_intersection: tangent line degenerate");
}

template <class K>
Triple<K> third_raw(const std::array<K, 10>& coeffs, const Triple<K>& p, const Triple<K>& q,
                    bool equal, const Triple<K>& grad_p, const K& zero) {
  if (!equal) {
    std::array<K, 4> bc = restrict_to_line(coeffs, p, q, zero);
    // both points on the curve: s^3 and t^3 coefficients vanish
    if (!k_is_zero(bc[0]) || !k_is_zero(bc[3]))
      throw std::invalid_argument("third_intersection: input point not on the curve");
    const K& b = bc[1];
    const K& c = bc[2];
    if (k_is_zero(b) && k_is_zero(c))
      throw std::logic_error("third_intersection: line contained in the curve");
    Triple<K> r;
    for (int k = 0; k < 3; ++k) r[k] = k_add(k_mul(k_neg(c), p[k]), k_mul(b, q[k]));
    return r;
  }
  Triple<K> t = tangent_direction(grad_p, p, zero);
  std::array<K, 4> bc = restrict_to_line(coeffs, p, t, zero);
  // tangency forces the s^3 and s^2 t coefficients to vanish
  if (!k_is_zero(bc[0]) || !k_is_zero(bc[1]))
    throw std::logic_error("third_intersection: tangency failure");
  const K& c = bc[2];
  const K& d = bc[3];
  if (k_is_zero(c) && k_is_zero(d))
    throw std::logic_error("third_intersection: tangent line contained in the curve");
  Triple<K> r;
  for (int k = 0; k < 3; ++k) r[k] = k_add(k_mul(k_neg(d), p[k]), k_mul(c, t[k]));
  return r;
}

}  // namespace

ProjPoint third_intersection(const CubicForm& f, const ProjPoint& p, const ProjPoint& q) {
  if (evaluate(f, p) != 0 || evaluate(f, q) != 0)
    throw std::invalid_argument("third_intersection: point not on the curve");
  bool equal = (p == q);
  Triple<BigInt> grad{BigInt(0), BigInt(0), BigInt(0)};
  if (equal) {
    auto g = gradient(f, p);
    grad = {g[0], g[1], g[2]};
  }
  Triple<BigInt> r = third_raw<BigInt>(f.coeffs, p.x, q.x, equal, grad, BigInt(0));
  return normalize_point(r);
}

FpPoint third_intersection(const FpCubic& f, const FpPoint& p, const FpPoint& q) {
  if (!fp_is_zero(evaluate(f, p)) || !fp_is_zero(evaluate(f, q)))
    throw std::invalid_argument("third_intersection: point not on the reduced curve");
  bool equal = (p == q);
  Triple<Fp> grad = {fp_zero(f.p), fp_zero(f.p), fp_zero(f.p)};
  if (equal) {
    auto g = gradient(f, p);
    grad = {g[0], g[1], g[2]};
  }
  std::array<Fp, 10> coeffs = f.c;
  Triple<Fp> r = third_raw<Fp>(coeffs, p.x, q.x, equal, grad, fp_zero(f.p));
  return normalize_fp_point(r);
}

GroupContext make_group_context(const CubicForm& f, const ProjPoint& base) {
  if (evaluate(f, base) != 0)
    throw std::invalid_argument("make_group_context: base point not on the curve");
  return GroupContext{f, base};
}

FpGroupContext make_fp_group_context(const CubicForm& f, std::uint64_t p,
                                     std::optional<FpPoint> base) {
  if (!good_reduction(f, p))
    throw std::domain_error("make_fp_group_context: bad reduction at p = " + std::to_string(p));
  FpCubic fq = reduce_mod_p(f, p);
  FpPoint o;
  if (base) {
    o = *base;
  } else {
    auto pts = enumerate_points_fp(fq);
    if (pts.empty()) throw std::logic_error("make_fp_group_context: no F_p points");
    o = pts.front();
  }
  if (!fp_is_zero(evaluate(fq, o)))
    throw std::invalid_argument("make_fp_group_context: base point not on the reduced curve");
  return FpGroupContext{fq, o};
}

FpGroupContext make_fp_group_context(const GroupContext& ctx, std::uint64_t p) {
  return make_fp_group_context(ctx.form, p, reduce_point_mod_p(ctx.base, p));
}

ProjPoint add(const GroupContext& ctx, const ProjPoint& p, const ProjPoint& q) {
  return third_intersection(ctx.form, ctx.base, third_intersection(ctx.form, p, q));
}

ProjPoint negate(const GroupContext& ctx, const ProjPoint& p) {
  return third_intersection(ctx.form, p, third_intersection(ctx.form, ctx.base, ctx.base));
}

ProjPoint sub(const GroupContext& ctx, const ProjPoint& p, const ProjPoint& q) {
  return add(ctx, p, negate(ctx, q));
}

ProjPoint scalar_mul(const GroupContext& ctx, long m, const ProjPoint& p) {
  if (m == 0) return ctx.base;
  if (m < 0) return negate(ctx, scalar_mul(ctx, -m, p));
  ProjPoint acc = ctx.base;
  ProjPoint pw = p;
  unsigned long e = static_cast<unsigned long>(m);
  while (true) {
    if (e & 1) acc = add(ctx, acc, pw);
    e >>= 1;
    if (e == 0) break;
    pw = add(ctx, pw, pw);
  }
  return acc;
}

FpPoint add(const FpGroupContext& ctx, const FpPoint& p, const FpPoint& q) {
  return third_intersection(ctx.form, ctx.base, third_intersection(ctx.form, p, q));
}

FpPoint negate(const FpGroupContext& ctx, const FpPoint& p) {
  return third_intersection(ctx.form, p, third_intersection(ctx.form, ctx.base, ctx.base));
}

FpPoint sub(const FpGroupContext& ctx, const FpPoint& p, const FpPoint& q) {
  return add(ctx, p, negate(ctx, q));
}

FpPoint scalar_mul(const FpGroupContext& ctx, long m, const FpPoint& p) {
  if (m == 0) return ctx.base;
  if (m < 0) return negate(ctx, scalar_mul(ctx, -m, p));
  FpPoint acc = ctx.base;
  FpPoint pw = p;
  unsigned long e = static_cast<unsigned long>(m);
  while (true) {
    if (e & 1) acc = add(ctx, acc, pw);
    e >>= 1;
    if (e == 0) break;
    pw = add(ctx, pw, pw);
  }
  return acc;
}

bool check_divisor_relation_with_base(const CubicForm& f, long m, const ProjPoint& p,
                                      const ProjPoint& q, const ProjPoint& r,
                                      const ProjPoint& base) {
  if (m < 1) throw std::invalid_argument("check_divisor_relation: m must be positive");
  GroupContext ctx = make_group_context(f, base);
  ProjPoint want = sub(ctx, scalar_mul(ctx, m, q), scalar_mul(ctx, m - 1, r));
  return want == p;
}

bool check_divisor_relation(const CubicForm& f, long m, const ProjPoint& p,
                            const ProjPoint& q, const ProjPoint& r) {
  return check_divisor_relation_with_base(f, m, p, q, r, r);
}

std::optional<ProjPoint> divide_point(const GroupContext& ctx, long m, const ProjPoint& d,
                                      const std::vector<ProjPoint>& candidates) {
  if (m < 1) throw std::invalid_argument("divide_point: m must be positive");
  if (evaluate(ctx.form, d) != 0)
    throw std::invalid_argument("divide_point: target not on the curve");
  for (const ProjPoint& s : candidates) {
    if (scalar_mul(ctx, m, s) == d) return s;
  }
  return std::nullopt;
}

}  // namespace cubicount
