#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "cubicount/detmethod.hpp"

using namespace cubicount;

namespace {

CubicForm fermat() {
  return CubicForm::from_monomials({{{3, 0, 0}, 1}, {{0, 3, 0}, 1}, {{0, 0, 3}, 1}});
}

CubicForm f6() {
  return CubicForm::from_monomials({{{3, 0, 0}, 1}, {{0, 3, 0}, 1}, {{0, 0, 3}, -6}});
}

ProjPoint pt(long a, long b, long c) {
  return normalize_point(std::array<BigInt, 3>{BigInt(a), BigInt(b), BigInt(c)});
}

// F6 pairs (m Q - (m-1) R, Q) seeded by multiples k of the generator
std::vector<XPair> f6_pairs(long m, const std::vector<long>& ks) {
  CubicForm f = f6();
  ProjPoint o = pt(1, -1, 0), g = pt(17, 37, 21);
  GroupContext ctx = make_group_context(f, o);
  std::vector<ProjPoint> seeds;
  for (long k : ks) seeds.push_back(scalar_mul(ctx, k, g));
  return build_x_points(f, o, m, seeds, 1000);
}

std::vector<long> range1(long n) {
  std::vector<long> ks;
  for (long k = 1; k <= n; ++k) ks.push_back(k);
  return ks;
}

std::vector<long> pm_range(long n) {
  std::vector<long> ks;
  for (long k = 1; k <= n; ++k) {
    ks.push_back(k);
    ks.push_back(-k);
  }
  return ks;
}

}  // namespace

TEST_CASE("all_bimonomials") {
  CHECK(all_bimonomials(1, 1).size() == 9);
  CHECK(all_bimonomials(0, 0).size() == 1);
  CHECK(all_bimonomials(2, 1).size() == 18);
  auto mons = all_bimonomials(1, 1);
  CHECK(mons.front().label() == "x0*y0");
  CHECK(mons.back().label() == "x2*y2");
  // the x-part order follows the cubic coefficient convention
  auto cubicish = all_bimonomials(3, 0);
  REQUIRE(cubicish.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(cubicish[i].e == CubicForm::exponents()[i]);
}

TEST_CASE("evaluate_bimonomial") {
  BiMonomial mono{{1, 0, 0}, {0, 0, 1}};  // x0 * y2
  CHECK(evaluate_bimonomial(mono, pt(1, 0, -1), pt(1, 0, -1)) == -1);
  BiMonomial big{{1, 0, 2}, {0, 3, 0}};
  CHECK(evaluate_bimonomial(big, pt(2, 5, -3), pt(1, -2, 7)) == BigInt(2 * 9 * -8));
}

TEST_CASE("select_independent_monomials reaches s = 3(m^2 a + b)") {
  CubicForm f = f6();
  ProjPoint r = pt(1, -1, 0);
  auto b11 = select_independent_monomials(f, r, 1, 1, 1);
  CHECK(b11.monomials.size() == 6);
  CHECK(b11.witness_q == 503);
  CHECK(b11.witness_rank == 6);

  auto b14 = select_independent_monomials(f, r, 2, 1, 4);
  CHECK(b14.monomials.size() == 24);

  CHECK_THROWS_AS(select_independent_monomials(f, r, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(select_independent_monomials(f, r, 2, 1, 3), std::invalid_argument);

  // deterministic given identical inputs
  auto again = select_independent_monomials(f, r, 1, 1, 1);
  REQUIRE(again.monomials.size() == b11.monomials.size());
  for (std::size_t i = 0; i < again.monomials.size(); ++i)
    CHECK(again.monomials[i] == b11.monomials[i]);
}

TEST_CASE("build_matrix") {
  CubicForm f = f6();
  auto pairs = f6_pairs(1, range1(3));
  auto basis = select_independent_monomials(f, pt(1, -1, 0), 1, 1, 1);
  ExactMatrix m = build_matrix(pairs, basis);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 6);
  CHECK(m.row_labels().size() == 3);
  CHECK(m.col_labels().size() == 6);
  // entries match an independent per-monomial recomputation
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    for (std::size_t i = 0; i < basis.monomials.size(); ++i) {
      const BiMonomial& mono = basis.monomials[i];
      BigInt want = 1;
      for (int k = 0; k < 3; ++k) want *= pow_ui(pairs[j].p.x[k], mono.e[k]);
      for (int k = 0; k < 3; ++k) want *= pow_ui(pairs[j].q.x[k], mono.f[k]);
      CHECK(m.at(j, i) == BigRat(want));
    }
  }
}

TEST_CASE("congruence_blocks") {
  CubicForm f = f6();
  auto pairs = f6_pairs(2, range1(8));
  REQUIRE(pairs.size() == 8);

  BlockPartition blocks = congruence_blocks(f, pairs, 5);
  // brute-force regrouping oracle
  std::map<std::array<std::uint64_t, 3>, std::vector<std::size_t>> oracle;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    oracle[reduce_point_mod_p(pairs[j].q, 5).values()].push_back(j);
  REQUIRE(blocks.blocks.size() == oracle.size());
  for (const auto& [key, rows] : blocks.blocks) {
    REQUIRE(oracle.count(key) == 1);
    CHECK(oracle[key] == rows);
  }

  // more pairs than n_p forces a block of size >= 2 (n_5 = 6 here)
  std::size_t largest = 0;
  for (const auto& [key, rows] : blocks.blocks) largest = std::max(largest, rows.size());
  CHECK(largest >= 2);

  // all rows covered exactly once
  std::set<std::size_t> seen;
  for (const auto& [key, rows] : blocks.blocks)
    for (std::size_t j : rows) CHECK(seen.insert(j).second);
  CHECK(seen.size() == pairs.size());

  CHECK_THROWS_AS(congruence_blocks(f, pairs, 2), std::domain_error);
}

TEST_CASE("lemma5_certificate") {
  // E = 1 is vacuous
  ExactMatrix one(1, 1);
  one.at(0, 0) = 7;
  auto r1 = lemma5_certificate(one, 5, 1);
  CHECK(r1.ok);
  CHECK(r1.required == 0);

  // E = 2 requires p | det
  ExactMatrix bad(2, 2);
  bad.at(0, 0) = 1; bad.at(0, 1) = 0;
  bad.at(1, 0) = 0; bad.at(1, 1) = 1;
  auto r2 = lemma5_certificate(bad, 5, 2);
  CHECK(r2.required == 1);
  CHECK(!r2.ok);

  // blocks built from genuine pairs on the pair curve satisfy the bound
  CubicForm f = f6();
  auto pairs = f6_pairs(2, range1(8));
  auto basis = select_independent_monomials(f, pt(1, -1, 0), 2, 1, 4);
  ExactMatrix m = build_matrix(pairs, basis);
  for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    BlockPartition blocks = congruence_blocks(f, pairs, p);
    for (const auto& [key, rows] : blocks.blocks) {
      std::size_t e = rows.size();
      if (e < 2) continue;
      ExactMatrix sub(e, e);  // block rows x first E basis columns
      for (std::size_t i = 0; i < e; ++i)
        for (std::size_t j = 0; j < e; ++j) sub.at(i, j) = m.at(rows[i], j);
      auto res = lemma5_certificate(sub, p, e);
      CHECK(res.ok);
      if (!res.det_zero) CHECK(res.v_p >= res.required);
      // and with the last E columns as well
      for (std::size_t i = 0; i < e; ++i)
        for (std::size_t j = 0; j < e; ++j)
          sub.at(i, j) = m.at(rows[i], m.cols() - e + j);
      CHECK(lemma5_certificate(sub, p, e).ok);
    }
  }
}

TEST_CASE("lemma6_certificate and global_factor on a square fixture") {
  CubicForm f = f6();
  auto pairs = f6_pairs(1, range1(8));
  auto basis = select_independent_monomials(f, pt(1, -1, 0), 1, 1, 1);
  ExactMatrix m = build_matrix(pairs, basis);
  REQUIRE(m.cols() == 6);

  std::vector<XPair> dpairs(pairs.begin(), pairs.begin() + 6);
  ExactMatrix delta(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) delta.at(i, j) = m.at(i, j);

  BigRat det = det_exact(delta);
  CHECK(det != 0);

  for (std::uint64_t p : {5ull, 7ull, 11ull}) {
    BlockPartition blocks = congruence_blocks(f, dpairs, p);
    DivisibilityCertificate cert = lemma6_certificate(f, delta, blocks);
    CHECK(cert.verified);
    long expect = 0;
    for (std::size_t sz : cert.block_sizes) expect += static_cast<long>(sz * (sz - 1) / 2);
    CHECK(cert.exponent == expect);
    if (!cert.det_zero) CHECK(valuation(det, p) >= cert.exponent);
  }

  GlobalFactorReport rep = global_factor(f, delta, dpairs, 20, BigInt(100));
  CHECK(!rep.det_zero);
  REQUIRE(rep.divides_det.has_value());
  CHECK(*rep.divides_det);
  // T equals the product of the per-prime powers, recomputed independently
  BigInt t = 1;
  for (const auto& c : rep.certificates)
    t *= pow_ui(BigInt(static_cast<unsigned long>(c.p)), static_cast<unsigned long>(c.exponent));
  CHECK(rep.t == t);
  CHECK(rep.log_bound_rhs.has_value());
}

TEST_CASE("global_factor with all singleton blocks gives T = 1") {
  CubicForm f = f6();
  auto pairs = f6_pairs(1, range1(6));
  auto basis = select_independent_monomials(f, pt(1, -1, 0), 1, 1, 1);
  ExactMatrix m = build_matrix(pairs, basis);
  // pick a prime large enough that the six reductions stay distinct
  std::uint64_t p = 101;
  BlockPartition blocks = congruence_blocks(f, pairs, p);
  bool all_singleton = true;
  for (const auto& [key, rows] : blocks.blocks) all_singleton &= rows.size() == 1;
  if (all_singleton) {
    DivisibilityCertificate cert = lemma6_certificate(f, m, blocks);
    CHECK(cert.exponent == 0);
    CHECK(cert.verified);
  }
}

TEST_CASE("global_factor handles a vanishing determinant") {
  CubicForm f = f6();
  auto pairs = f6_pairs(1, range1(5));
  std::vector<XPair> padded = pairs;
  padded.push_back(pairs.front());  // duplicate row forces det = 0
  auto basis = select_independent_monomials(f, pt(1, -1, 0), 1, 1, 1);
  ExactMatrix m = build_matrix(padded, basis);
  GlobalFactorReport rep = global_factor(f, m, padded, 10);
  CHECK(rep.det_zero);
  CHECK(!rep.divides_det.has_value());
  CHECK(!rep.certificates.empty());
  for (const auto& c : rep.certificates) CHECK(c.verified);
}

TEST_CASE("row sign flips leave certificates invariant") {
  CubicForm f = f6();
  auto pairs = f6_pairs(1, range1(6));
  auto basis = select_independent_monomials(f, pt(1, -1, 0), 1, 1, 1);
  ExactMatrix m = build_matrix(pairs, basis);
  ExactMatrix flipped = m;
  // replace the first pair's representative by its negation: each entry of
  // that row scales by (-1)^(a+b)
  for (std::size_t j = 0; j < m.cols(); ++j) flipped.at(0, j) = -m.at(0, j) * 1;
  BigRat d0 = det_exact(m), d1 = det_exact(flipped);
  CHECK((d0 == d1 || d0 == -d1));
  if (d0 != 0) {
    for (std::uint64_t p : {5ull, 7ull}) {
      CHECK(valuation(d0, p) == valuation(d1, p));
    }
  }
}

TEST_CASE("find_auxiliary_form present iff rank < s") {
  CubicForm f = f6();
  ProjPoint r = pt(1, -1, 0);
  auto basis = select_independent_monomials(f, r, 1, 1, 1);

  // scarce points: 3 pairs, s = 6, form must exist
  auto few = f6_pairs(1, {1, -1, 2});
  auto aux = find_auxiliary_form(f, few, basis);
  REQUIRE(aux.has_value());
  CHECK(aux->coeffs.size() == 6);
  // primitive and sign-normalized
  std::vector<BigInt> c = aux->coeffs;
  CHECK(content(c) == 1);
  for (const auto& x : c) {
    if (x != 0) { CHECK(x > 0); break; }
  }
  // vanishes at every pair (fresh evaluation)
  for (const auto& xp : few) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < 6; ++i)
      acc += aux->coeffs[i] * evaluate_bimonomial(basis.monomials[i], xp.p, xp.q);
    CHECK(acc == 0);
  }
  CHECK(aux->nonvanishing_q >= 503);

  // 24 distinct pairs saturate the rank: no form
  auto many = f6_pairs(1, pm_range(12));
  REQUIRE(many.size() == 24);
  ExactMatrix m = build_matrix(many, basis);
  CHECK(rank_nullspace(m).rank == 6);
  CHECK(!find_auxiliary_form(f, many, basis).has_value());
}

TEST_CASE("bezout_count_check") {
  auto pairs = f6_pairs(1, range1(5));
  CHECK(bezout_count_check(pairs, 1, 1, 1));  // 5 <= 6
  CHECK(bezout_bound(2, 1, 4) == 24);
  auto dup = pairs;
  dup.push_back(pairs.front());
  CHECK(bezout_count_check(dup, 1, 1, 1));  // still 5 distinct
  auto seven = f6_pairs(1, range1(7));
  CHECK(!bezout_count_check(seven, 1, 1, 1));  // 7 > 6
}

TEST_CASE("run_experiment on the Fermat cubic") {
  CubicForm f = fermat();
  ExperimentConfig cfg;
  cfg.A = 3.0;
  ExperimentReport rep = run_experiment(f, pt(1, -1, 0), 1, 100, cfg);
  CHECK(rep.n_points == 3);
  CHECK(rep.pairs.size() == 3);  // the diagonal pairs of the three points
  CHECK(rep.b == 1);
  CHECK(rep.a == 1);
  CHECK(rep.s == 6);
  CHECK(rep.scarcity_forced);
  CHECK(rep.rank < static_cast<std::size_t>(rep.s));
  CHECK(rep.aux_found);
  CHECK(rep.aux_rechecked);
  CHECK(rep.bezout_ok);
  CHECK(rep.bezout_count == 3);
  CHECK(rep.prescribed_ineq8.holds);
  CHECK(!rep.delta_built);

  // determinism: identical inputs give identical reports
  ExperimentReport rep2 = run_experiment(f, pt(1, -1, 0), 1, 100, cfg);
  CHECK(rep2.n_points == rep.n_points);
  CHECK(rep2.aux->coeffs == rep.aux->coeffs);
  CHECK(rep2.basis.witness_q == rep.basis.witness_q);
}

TEST_CASE("run_experiment with m = 2 on F6") {
  CubicForm f = f6();
  ExperimentConfig cfg;
  cfg.A = 3.0;
  cfg.seed_multiples = 2;
  ExperimentReport rep = run_experiment(f, pt(1, -1, 0), 2, 100, cfg);
  CHECK(rep.n_points == 3);  // [1:-1:0], [17:37:21], [37:17:21]
  CHECK(rep.b == 4);
  CHECK(rep.s == rep.a * 12 + 12);
  // only the seed Q = R yields a pair with H(P) <= 100 at m = 2
  CHECK(rep.pairs.size() == 1);
  CHECK(rep.scarcity_forced);
  CHECK(rep.aux_found);
  CHECK(rep.bezout_ok);
  CHECK(rep.basis.monomials.size() == static_cast<std::size_t>(rep.s));
}
