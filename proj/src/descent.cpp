#include "cubicount/descent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cubicount {

namespace {

double log_bigint(const BigInt& n) {
  long e = 0;
  double d = mpz_get_d_2exp(&e, n.get_mpz_t());
  return std::log(std::abs(d)) + static_cast<double>(e) * std::log(2.0);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

bool operator==(const XPair& a, const XPair& b) {
  return a.m == b.m && a.p == b.p && a.q == b.q && a.r == b.r;
}

ClassPartition partition_classes(const std::vector<ProjPoint>& points, long m,
                                 const GroupContext& ctx,
                                 const std::vector<ProjPoint>& search_set) {
  if (m < 1) throw std::invalid_argument("partition_classes: m must be positive");
  for (const auto& p : points) {
    if (evaluate(ctx.form, p) != 0)
      throw std::invalid_argument("partition_classes: point not on the curve");
  }

  ClassPartition out;
  out.m = m;
  if (m == 1) {
    // every difference is trivially a first multiple
    if (!points.empty()) out.classes.push_back(points);
    out.method_note = "m = 1: single class, exact";
    return out;
  }

  std::vector<ProjPoint> multiples;
  multiples.reserve(search_set.size());
  for (const auto& s : search_set) multiples.push_back(scalar_mul(ctx, m, s));
  std::sort(multiples.begin(), multiples.end());

  UnionFind uf(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      ProjPoint diff = sub(ctx, points[i], points[j]);
      if (std::binary_search(multiples.begin(), multiples.end(), diff)) uf.unite(i, j);
    }
  }
  std::vector<long> class_of(points.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t root = uf.find(i);
    if (class_of[root] < 0) {
      class_of[root] = static_cast<long>(out.classes.size());
      out.classes.emplace_back();
    }
    out.classes[class_of[root]].push_back(points[i]);
  }
  out.method_note = "heuristic: bounded division search over " +
                    std::to_string(search_set.size()) +
                    " candidates; partition may be finer than the true one";
  return out;
}

std::vector<XPair> build_x_points(const CubicForm& f, const ProjPoint& r, long m,
                                  const std::vector<ProjPoint>& seeds, std::size_t cap) {
  if (m < 1) throw std::invalid_argument("build_x_points: m must be positive");
  GroupContext ctx = make_group_context(f, r);
  std::vector<XPair> out;
  for (const ProjPoint& q : seeds) {
    if (out.size() >= cap) break;
    if (evaluate(f, q) != 0)
      throw std::invalid_argument("build_x_points: seed not on the curve");
    XPair xp;
    xp.p = scalar_mul(ctx, m, q);  // with base R, (m-1)R is the identity
    xp.q = q;
    xp.r = r;
    xp.m = m;
    if (!check_divisor_relation(f, m, xp.p, xp.q, xp.r))
      throw std::logic_error("build_x_points: relation verification failed");
    bool dup = false;
    for (const auto& e : out) {
      if (e.p == xp.p && e.q == xp.q) { dup = true; break; }
    }
    if (!dup) out.push_back(std::move(xp));
  }
  return out;
}

HeightExponentEstimate estimate_height_exponent(const std::vector<XPair>& pairs) {
  if (pairs.empty())
    throw std::invalid_argument("estimate_height_exponent: empty pair list");
  HeightExponentEstimate est;
  for (const XPair& xp : pairs) {
    HeightExponentRow row;
    row.pair = xp;
    row.h_p = height(xp.p);
    row.h_q = height(xp.q);
    row.h_r = height(xp.r);
    BigInt denom = 3;
    if (row.h_p > denom) denom = row.h_p;
    if (row.h_r > denom) denom = row.h_r;
    row.ratio = log_bigint(row.h_q) / log_bigint(denom);
    est.exponent = std::max(est.exponent, row.ratio);
    est.rows.push_back(std::move(row));
  }
  return est;
}

}  // namespace cubicount
