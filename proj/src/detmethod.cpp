#include "cubicount/detmethod.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cubicount/bounds.hpp"
#include "cubicount/real.hpp"

namespace cubicount {

using u64 = std::uint64_t;

// ---- monomials -------------------------------------------------------------

namespace {

std::vector<std::array<int, 3>> degree_triples(int d) {
  std::vector<std::array<int, 3>> out;
  for (int e0 = d; e0 >= 0; --e0)
    for (int e1 = d - e0; e1 >= 0; --e1) out.push_back({e0, e1, d - e0 - e1});
  return out;
}

void append_var(std::ostringstream& os, const char* name, int idx, int e, bool& first) {
  if (e == 0) return;
  if (!first) os << "*";
  os << name << idx;
  if (e > 1) os << "^" << e;
  first = false;
}

}  // namespace

std::string BiMonomial::label() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < 3; ++i) append_var(os, "x", i, e[i], first);
  for (int i = 0; i < 3; ++i) append_var(os, "y", i, f[i], first);
  if (first) os << "1";
  return os.str();
}

bool operator==(const BiMonomial& a, const BiMonomial& b) { return a.e == b.e && a.f == b.f; }

std::vector<BiMonomial> all_bimonomials(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("all_bimonomials: negative bidegree");
  std::vector<BiMonomial> out;
  for (const auto& e : degree_triples(a))
    for (const auto& f : degree_triples(b)) out.push_back(BiMonomial{e, f});
  return out;
}

BigInt evaluate_bimonomial(const BiMonomial& mono, const ProjPoint& p, const ProjPoint& q) {
  BigInt acc = 1;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < mono.e[i]; ++k) acc *= p.x[i];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < mono.f[i]; ++k) acc *= q.x[i];
  return acc;
}

Fp evaluate_bimonomial(const BiMonomial& mono, const FpPoint& p, const FpPoint& q, u64 prime) {
  Fp acc = fp_one(prime);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < mono.e[i]; ++k) acc = acc * p.x[i];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < mono.f[i]; ++k) acc = acc * q.x[i];
  return acc;
}

// ---- F_q samples of the pair curve -----------------------------------------

u64 smallest_good_prime_above(const CubicForm& f, u64 x) {
  u64 p = next_prime_after(x);
  while (!good_reduction(f, p)) p = next_prime_after(p);
  return p;
}

XSampleSet x_samples_mod_q(const CubicForm& f, const ProjPoint& r, long m, u64 q,
                           std::size_t want, u64 seed) {
  if (m < 1) throw std::invalid_argument("x_samples_mod_q: m must be positive");
  if (!good_reduction(f, q))
    throw std::domain_error("x_samples_mod_q: bad reduction at q = " + std::to_string(q));
  XSampleSet out;
  out.q = q;
  out.form = reduce_mod_p(f, q);
  FpPoint rq = reduce_point_mod_p(r, q);
  if (!fp_is_zero(evaluate(out.form, rq)))
    throw std::invalid_argument("x_samples_mod_q: R does not reduce onto the curve");
  // base point R*: with this base, m Q* - (m-1) R* is just the m-fold sum
  FpGroupContext ctx{out.form, rq};
  std::vector<FpPoint> pts = enumerate_points_fp(out.form);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(pts.begin(), pts.end(), rng);
  }
  for (const FpPoint& qq : pts) {
    if (out.samples.size() >= want) break;
    out.samples.emplace_back(scalar_mul(ctx, m, qq), qq);
  }
  return out;
}

// ---- basis selection ---------------------------------------------------------

MonomialBasis select_independent_monomials(const CubicForm& f, const ProjPoint& r, long m,
                                           int a, int b, std::optional<u64> q_start,
                                           u64 seed, int max_retries) {
  if (m < 1) throw std::invalid_argument("select_independent_monomials: m must be positive");
  if (a < 1 || b < m * m)
    throw std::invalid_argument(
        "select_independent_monomials: need a >= 1 and b >= m^2 for the dimension count");
  const std::size_t s = static_cast<std::size_t>(3 * (static_cast<long>(m) * m * a + b));
  std::vector<BiMonomial> mons = all_bimonomials(a, b);

  u64 q;
  if (q_start) {
    q = (is_prime(*q_start) && good_reduction(f, *q_start))
            ? *q_start
            : smallest_good_prime_above(f, *q_start);
  } else {
    q = smallest_good_prime_above(f, 500);
  }

  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    XSampleSet set = x_samples_mod_q(f, r, m, q, 2 * s + 16, seed);
    if (set.samples.size() >= 2 * s) {
      const std::size_t n = set.samples.size();
      // incremental Gaussian elimination over F_q
      std::vector<std::vector<u64>> rows;     // reduced, pivot normalized to 1
      std::vector<std::size_t> pivots;
      std::vector<BiMonomial> chosen;
      for (const BiMonomial& mono : mons) {
        std::vector<u64> v(n);
        for (std::size_t j = 0; j < n; ++j)
          v[j] = evaluate_bimonomial(mono, set.samples[j].first, set.samples[j].second, q).v;
        for (std::size_t k = 0; k < rows.size(); ++k) {
          u64 c = v[pivots[k]];
          if (c == 0) continue;
          for (std::size_t j = 0; j < n; ++j) {
            u64 sub = (unsigned __int128)c * rows[k][j] % q;
            v[j] = v[j] >= sub ? v[j] - sub : v[j] + (q - sub);
          }
        }
        std::size_t piv = n;
        for (std::size_t j = 0; j < n; ++j) {
          if (v[j] != 0) { piv = j; break; }
        }
        if (piv == n) continue;
        u64 inv = fp_inv(Fp{v[piv], q}).v;
        for (std::size_t j = 0; j < n; ++j) v[j] = (unsigned __int128)v[j] * inv % q;
        rows.push_back(std::move(v));
        pivots.push_back(piv);
        chosen.push_back(mono);
        if (chosen.size() == s) break;
      }
      if (chosen.size() == s) {
        MonomialBasis basis;
        basis.a = a;
        basis.b = b;
        basis.m = m;
        basis.monomials = std::move(chosen);
        basis.witness_q = q;
        basis.witness_rank = s;
        basis.sample_count = set.samples.size();
        return basis;
      }
    }
    q = smallest_good_prime_above(f, 2 * q);
  }
  throw std::runtime_error(
      "select_independent_monomials: basis deficiency, evaluation rank never reached s = " +
      std::to_string(s) + " (contradicts the dimension count)");
}

// ---- evaluation matrix and blocks --------------------------------------------

ExactMatrix build_matrix(const std::vector<XPair>& pairs, const MonomialBasis& basis) {
  if (pairs.empty()) throw std::invalid_argument("build_matrix: no pairs");
  ExactMatrix m(pairs.size(), basis.monomials.size());
  std::vector<std::string> row_labels, col_labels;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    row_labels.push_back(std::to_string(j) + ":" + pairs[j].p.to_string() + "|" +
                         pairs[j].q.to_string());
    for (std::size_t i = 0; i < basis.monomials.size(); ++i)
      m.at(j, i) = evaluate_bimonomial(basis.monomials[i], pairs[j].p, pairs[j].q);
  }
  for (const BiMonomial& mono : basis.monomials) col_labels.push_back(mono.label());
  m.set_row_labels(std::move(row_labels));
  m.set_col_labels(std::move(col_labels));
  return m;
}

BlockPartition congruence_blocks(const CubicForm& f, const std::vector<XPair>& pairs, u64 p) {
  if (!good_reduction(f, p))
    throw std::domain_error("congruence_blocks: bad reduction at p = " + std::to_string(p));
  std::map<std::array<u64, 3>, std::vector<std::size_t>> by_reduction;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    by_reduction[reduce_point_mod_p(pairs[j].q, p).values()].push_back(j);
  BlockPartition out;
  out.p = p;
  out.blocks.assign(by_reduction.begin(), by_reduction.end());
  return out;
}

// ---- certificates -------------------------------------------------------------

Lemma5Result lemma5_certificate(const ExactMatrix& delta_star, u64 p, std::size_t e) {
  if (!delta_star.square() || delta_star.rows() != e)
    throw std::invalid_argument("lemma5_certificate: matrix must be E x E");
  Lemma5Result out;
  out.required = static_cast<long>(e * (e - 1) / 2);
  BigRat det = det_exact(delta_star);
  if (det == 0) {
    out.det_zero = true;
    out.ok = true;
    return out;
  }
  out.v_p = valuation(det, p);
  out.ok = out.v_p >= out.required;
  return out;
}

namespace {

DivisibilityCertificate make_divisibility_certificate(const CubicForm& f, const BigRat& det,
                                                      std::size_t s, const BlockPartition& blocks) {
  DivisibilityCertificate cert;
  cert.p = blocks.p;
  std::size_t covered = 0;
  for (const auto& [key, rows] : blocks.blocks) {
    cert.block_sizes.push_back(rows.size());
    cert.exponent += static_cast<long>(rows.size() * (rows.size() - 1) / 2);
    covered += rows.size();
  }
  if (covered != s)
    throw std::invalid_argument("divisibility certificate: blocks do not cover the rows");
  if (det == 0) {
    cert.det_zero = true;
    cert.verified = true;
  } else {
    cert.v_p_det = valuation(det, blocks.p);
    cert.verified = cert.v_p_det >= cert.exponent;
  }
  u64 np = count_points_fp(f, blocks.p);
  cert.s_sq_over_2np = static_cast<double>(s) * static_cast<double>(s) /
                       (2.0 * static_cast<double>(np));
  return cert;
}

}  // namespace

DivisibilityCertificate lemma6_certificate(const CubicForm& f, const ExactMatrix& delta,
                                           const BlockPartition& blocks) {
  if (!delta.square()) throw std::invalid_argument("lemma6_certificate: matrix must be square");
  return make_divisibility_certificate(f, det_exact(delta), delta.rows(), blocks);
}

GlobalFactorReport global_factor(const CubicForm& f, const ExactMatrix& delta,
                                 const std::vector<XPair>& pairs, u64 prime_limit,
                                 std::optional<BigInt> B) {
  if (!delta.square()) throw std::invalid_argument("global_factor: matrix must be square");
  if (pairs.size() != delta.rows())
    throw std::invalid_argument("global_factor: pair list must match the matrix rows");
  const std::size_t s = delta.rows();

  GlobalFactorReport out;
  BigRat det = det_exact(delta);
  out.det_zero = (det == 0);
  if (!out.det_zero)
    out.log_abs_det = Real::log(Real::abs(Real::of(det))).to_double();

  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(prime_limit))) {
    if (!good_reduction(f, p)) continue;
    BlockPartition blocks = congruence_blocks(f, pairs, p);
    DivisibilityCertificate cert = make_divisibility_certificate(f, det, s, blocks);
    out.t *= pow_ui(BigInt(static_cast<unsigned long>(p)),
                    static_cast<unsigned long>(cert.exponent));
    out.certificates.push_back(std::move(cert));
  }
  out.log_t = out.t == 1 ? 0.0 : log_to_double(out.t);
  if (!out.det_zero) {
    // T | det exactly; det is integral here since the entries are integers
    if (det.get_den() == 1) {
      BigInt num = det.get_num();
      out.divides_det = mpz_divisible_p(num.get_mpz_t(), out.t.get_mpz_t()) != 0;
    } else {
      bool ok = true;
      for (const auto& c : out.certificates) ok = ok && c.verified;
      out.divides_det = ok;
    }
  }
  if (B) {
    Real sreal = Real::of(static_cast<unsigned long>(s));
    Real logb = Real::log(Real::of(*B));
    out.log_bound_rhs =
        (sreal * sreal / Real::of(2.0) * Real::log(sreal / logb)).to_double();
  }
  return out;
}

// ---- auxiliary form ------------------------------------------------------------

std::optional<AuxiliaryForm> find_auxiliary_form(const CubicForm& f,
                                                 const std::vector<XPair>& pairs,
                                                 const MonomialBasis& basis, u64 seed) {
  if (pairs.empty())
    throw std::invalid_argument("find_auxiliary_form: empty pair list");
  const std::size_t s = basis.monomials.size();
  ExactMatrix m = build_matrix(pairs, basis);
  RankNullspace rn = rank_nullspace(m);
  if (rn.rank >= s) return std::nullopt;

  AuxiliaryForm aux;
  aux.coeffs = rn.basis.front();  // primitive and sign-normalized already

  // independent recheck: the form vanishes at every pair
  for (const XPair& xp : pairs) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (aux.coeffs[i] == 0) continue;
      acc += aux.coeffs[i] * evaluate_bimonomial(basis.monomials[i], xp.p, xp.q);
    }
    if (acc != 0)
      throw std::logic_error("find_auxiliary_form: nullspace form does not vanish at a pair");
  }

  // nonvanishing on the pair curve, certified at an F_q sample point
  const ProjPoint& r = pairs.front().r;
  u64 q = basis.witness_q;
  for (int attempt = 0; attempt < 6; ++attempt) {
    XSampleSet set = x_samples_mod_q(f, r, basis.m, q, 2 * s + 16, seed);
    for (const auto& [pp, qq] : set.samples) {
      Fp val = fp_zero(q);
      for (std::size_t i = 0; i < s; ++i) {
        if (aux.coeffs[i] == 0) continue;
        val = val + fp_from(q, aux.coeffs[i]) * evaluate_bimonomial(basis.monomials[i], pp, qq, q);
      }
      if (!fp_is_zero(val)) {
        aux.nonvanishing_q = q;
        aux.nonvanishing_sample = {pp, qq};
        return aux;
      }
    }
    q = smallest_good_prime_above(f, 2 * q);
  }
  throw std::runtime_error(
      "find_auxiliary_form: could not certify nonvanishing on the pair curve (enlarge q)");
}

bool bezout_count_check(const std::vector<XPair>& pairs, long m, int a, int b) {
  std::vector<std::pair<ProjPoint, ProjPoint>> distinct;
  for (const XPair& xp : pairs) distinct.emplace_back(xp.p, xp.q);
  std::sort(distinct.begin(), distinct.end(), [](const auto& u, const auto& v) {
    if (u.first < v.first) return true;
    if (v.first < u.first) return false;
    return u.second < v.second;
  });
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  return static_cast<long>(distinct.size()) <= bezout_bound(m, a, b);
}

// ---- experiment orchestration ----------------------------------------------------

namespace {

ExactMatrix take_rows(const ExactMatrix& m, std::size_t count) {
  ExactMatrix out(count, m.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j);
  return out;
}

}  // namespace

ExperimentReport run_experiment(const CubicForm& f, const ProjPoint& r, long m,
                                const BigInt& B, const ExperimentConfig& cfg) {
  if (m < 1) throw std::invalid_argument("run_experiment: m must be positive");
  if (B < 3) throw std::invalid_argument("run_experiment: B must be >= 3");
  SmoothnessVerdict verdict = smoothness_verdict(f);
  if (verdict.kind != SmoothnessVerdict::Kind::SmoothCertified)
    throw std::domain_error("run_experiment: curve not certified smooth (" +
                            verdict.to_string() + ")");

  ExperimentReport rep;
  rep.curve = f;
  rep.m = m;
  rep.B = B;
  rep.r = r;
  rep.u = cfg.u;

  GroupContext ctx = make_group_context(f, r);
  std::vector<ProjPoint> points = enumerate_rational_points(f, B);
  rep.n_points = points.size();
  rep.n_le_9 = points.size() <= 9;

  // seeds: the enumerated points and a few of their multiples
  std::vector<ProjPoint> seeds;
  auto add_seed = [&](const ProjPoint& p) {
    if (std::find(seeds.begin(), seeds.end(), p) == seeds.end()) seeds.push_back(p);
  };
  for (const auto& p : points) add_seed(p);
  for (const auto& p : points)
    for (int k = 2; k <= 1 + cfg.seed_multiples; ++k) add_seed(scalar_mul(ctx, k, p));

  std::vector<XPair> pairs_all = build_x_points(f, r, m, seeds, cfg.pair_cap);
  rep.n_pairs_all = pairs_all.size();
  for (const XPair& xp : pairs_all) {
    if (height(xp.p) <= B) rep.pairs.push_back(xp);
  }

  if (!pairs_all.empty())
    rep.height_exponent_estimate = estimate_height_exponent(pairs_all).exponent;
  double a_exp = cfg.A.value_or(std::max(1.0, std::ceil(rep.height_exponent_estimate)));
  rep.a_exponent_used = a_exp;

  ParameterChoice prescribed = parameter_choice(B, m, BigRat(a_exp), BigRat(cfg.u));
  rep.prescribed_a = prescribed.a;
  rep.prescribed_b = prescribed.b;
  rep.prescribed_s = prescribed.s;
  rep.prescribed_ineq8 = Ineq8Diagnostic{prescribed.ineq8_lhs, prescribed.ineq8_rhs, prescribed.ineq8_holds};

  // working parameters: the smallest a making s exceed the pair count,
  // capped by the prescribed choice when that is smaller
  rep.b = static_cast<int>(m * m);
  const std::size_t n = rep.pairs.size();
  if (cfg.a_override) {
    rep.a = *cfg.a_override;
    if (rep.a < 1) throw std::invalid_argument("run_experiment: a must be >= 1");
  } else {
    int a = 1;
    while (static_cast<std::size_t>(bezout_bound(m, a, rep.b)) <= n &&
           BigInt(a) < prescribed.a)
      ++a;
    rep.a = a;
  }
  rep.s = bezout_bound(m, rep.a, rep.b);
  rep.scarcity_forced = n < static_cast<std::size_t>(rep.s);

  rep.basis = select_independent_monomials(f, r, m, rep.a, rep.b, cfg.q, cfg.seed);

  Real logb = Real::log(Real::of(B));
  rep.log_norm_ratio = (Real::log(Real::of(f.coefficient_norm())) /
                        (Real::of(30ul) * logb)).to_double();

  if (!rep.pairs.empty()) {
    ExactMatrix mtx = build_matrix(rep.pairs, rep.basis);
    rep.rank = rank_nullspace(mtx).rank;

    const std::size_t s = static_cast<std::size_t>(rep.s);
    u64 prime_limit = cfg.prime_limit.value_or(std::min<u64>(s, 50));
    if (n >= s) {
      rep.delta_built = true;
      std::vector<XPair> delta_pairs(rep.pairs.begin(), rep.pairs.begin() + s);
      ExactMatrix delta = take_rows(mtx, s);
      rep.global = global_factor(f, delta, delta_pairs, prime_limit, B);
      rep.det_zero = rep.global.det_zero;
      rep.log_abs_det = rep.global.log_abs_det;
      rep.ineq5_rhs = (Real::of(static_cast<unsigned long>(s)) *
                           Real::log(Real::of(static_cast<unsigned long>(s))) +
                       Real::of(static_cast<unsigned long>(s)) *
                           (Real::of(static_cast<unsigned long>(rep.a)) +
                            Real::of(a_exp) * Real::of(static_cast<unsigned long>(rep.b))) *
                           logb)
                          .to_double();
      if (cfg.certify_all_minors && n > s && n - s <= 2) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::vector<bool> select(n, false);
        std::fill(select.begin(), select.begin() + s, true);
        do {
          std::vector<XPair> sub_pairs;
          ExactMatrix sub(s, mtx.cols());
          std::size_t row = 0;
          for (std::size_t i = 0; i < n; ++i) {
            if (!select[i]) continue;
            sub_pairs.push_back(rep.pairs[i]);
            for (std::size_t j = 0; j < mtx.cols(); ++j) sub.at(row, j) = mtx.at(i, j);
            ++row;
          }
          rep.minor_reports.push_back(global_factor(f, sub, sub_pairs, prime_limit, B));
        } while (std::prev_permutation(select.begin(), select.end()));
      }
    }

    if (rep.rank < s) {
      auto aux = find_auxiliary_form(f, rep.pairs, rep.basis, cfg.seed);
      if (aux) {
        rep.aux_found = true;
        rep.aux = std::move(aux);
        rep.aux_rechecked = true;  // find_auxiliary_form throws on recheck failure
      }
    }
  }

  rep.bezout_bound_value = rep.s;
  rep.bezout_count = rep.pairs.size();
  rep.bezout_ok = bezout_count_check(rep.pairs, m, rep.a, rep.b);
  return rep;
}

}  // namespace cubicount
