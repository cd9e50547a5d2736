// cubicount: exact point counts, chord-tangent arithmetic, and
// determinant-method certificates for smooth plane cubic curves.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cubicount/io.hpp"
#include "cubicount/real.hpp"

using namespace cubicount;

namespace {

ProjPoint parse_point(const std::string& s) {
  std::array<BigInt, 3> raw;
  std::stringstream ss(s);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i >= 3) throw std::invalid_argument("point must have three coordinates: " + s);
    raw[i++] = BigInt(tok);
  }
  if (i != 3) throw std::invalid_argument("point must have three coordinates: " + s);
  return normalize_point(raw);
}

CurveFile load_validated(const std::string& arg, bool force) {
  CurveFile c = load_curve_file(resolve_curve_path(arg));
  SmoothnessVerdict v = smoothness_verdict(c.form);
  if (v.kind == SmoothnessVerdict::Kind::SingularCertified)
    throw std::domain_error("curve is singular: " + v.to_string());
  if (v.kind == SmoothnessVerdict::Kind::Undetermined && !force)
    throw std::domain_error("smoothness undetermined; pass --force to proceed");
  return c;
}

ProjPoint base_point_of(const CurveFile& c, const std::string& flag) {
  if (!flag.empty()) return parse_point(flag);
  if (c.base_point) return *c.base_point;
  throw std::invalid_argument("no base point: the fixture has none and none was passed");
}

void emit(const Json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
  }
}

std::vector<ProjPoint> seeds_with_multiples(const GroupContext& ctx,
                                            const std::vector<ProjPoint>& points, int mult) {
  std::vector<ProjPoint> seeds;
  auto add = [&](const ProjPoint& p) {
    if (std::find(seeds.begin(), seeds.end(), p) == seeds.end()) seeds.push_back(p);
  };
  for (const auto& p : points) add(p);
  for (const auto& p : points)
    for (int k = 2; k <= mult; ++k) add(scalar_mul(ctx, k, p));
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact rational-point counts and determinant-method certificates "
               "for smooth plane cubic curves"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool force = false;
  app.add_option("--seed", seed, "seed for F_q sample shuffling (0 keeps sweep order)");
  app.add_flag("--force", force, "proceed when smoothness is undetermined");

  int rc = 0;

  // ---- check -------------------------------------------------------------
  auto* c_check = app.add_subcommand("check", "certify smoothness or singularity");
  struct { std::string curve; int budget = 25; std::string out; } check_opts;
  c_check->add_option("--curve", check_opts.curve)->required();
  c_check->add_option("--budget", check_opts.budget, "number of witness primes to try");
  c_check->add_option("--out", check_opts.out);
  c_check->callback([&] {
    CurveFile c = load_curve_file(resolve_curve_path(check_opts.curve));
    SmoothnessVerdict v = smoothness_verdict(c.form, check_opts.budget);
    emit(smoothness_to_json(v), check_opts.out);
    if (v.kind != SmoothnessVerdict::Kind::SmoothCertified) rc = 1;
  });

  // ---- points ------------------------------------------------------------
  auto* c_points = app.add_subcommand("points", "enumerate rational points of height <= B");
  struct { std::string curve; long B = 100; std::string out; } points_opts;
  c_points->add_option("--curve", points_opts.curve)->required();
  c_points->add_option("--B", points_opts.B)->required();
  c_points->add_option("--out", points_opts.out);
  c_points->callback([&] {
    CurveFile c = load_validated(points_opts.curve, force);
    auto pts = enumerate_rational_points(c.form, points_opts.B);
    std::string csv = points_csv(pts) + "N=" + std::to_string(pts.size()) + "\n";
    emit_text(csv, points_opts.out);
  });

  // ---- fp-count ----------------------------------------------------------
  auto* c_fp = app.add_subcommand("fp-count", "count points of the reduction mod p");
  struct { std::string curve; std::uint64_t p = 0; std::uint64_t limit = 0; std::string out; } fp_opts;
  c_fp->add_option("--curve", fp_opts.curve)->required();
  c_fp->add_option("--p", fp_opts.p, "a single good prime");
  c_fp->add_option("--limit", fp_opts.limit, "tabulate all good primes up to this bound");
  c_fp->add_option("--out", fp_opts.out);
  c_fp->callback([&] {
    CurveFile c = load_validated(fp_opts.curve, force);
    if (fp_opts.p != 0) {
      Json j;
      j["p"] = fp_opts.p;
      j["n_p"] = count_points_fp(c.form, fp_opts.p);
      emit(j, fp_opts.out);
    } else if (fp_opts.limit != 0) {
      std::ostringstream os;
      os << "p,n_p\n";
      for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(fp_opts.limit))) {
        if (!good_reduction(c.form, p)) continue;
        os << p << "," << count_points_fp(c.form, p) << "\n";
      }
      emit_text(os.str(), fp_opts.out);
    } else {
      throw std::invalid_argument("fp-count: pass --p or --limit");
    }
  });

  // ---- badprimes -----------------------------------------------------------
  auto* c_bad = app.add_subcommand("badprimes", "scan-limited bad reduction profile");
  struct { std::string curve; std::uint64_t bound = 10000; std::string out; } bad_opts;
  c_bad->add_option("--curve", bad_opts.curve)->required();
  c_bad->add_option("--bound", bad_opts.bound);
  c_bad->add_option("--out", bad_opts.out);
  c_bad->callback([&] {
    CurveFile c = load_validated(bad_opts.curve, force);
    emit(profile_to_json(reduction_profile(c.form, bad_opts.bound)), bad_opts.out);
  });

  // ---- group ----------------------------------------------------------------
  auto* c_group = app.add_subcommand("group", "chord-tangent group arithmetic");
  c_group->require_subcommand(1);
  struct {
    std::string curve, P, Q, R, O, out;
    long m = 2;
  } g_opts;
  auto add_group_common = [&](CLI::App* sub, bool needs_q) {
    sub->add_option("--curve", g_opts.curve)->required();
    sub->add_option("--P", g_opts.P)->required();
    if (needs_q) sub->add_option("--Q", g_opts.Q)->required();
    sub->add_option("--O", g_opts.O, "base point (defaults to the fixture base point)");
    sub->add_option("--out", g_opts.out);
  };
  auto* g_add = c_group->add_subcommand("add", "P + Q");
  add_group_common(g_add, true);
  g_add->callback([&] {
    CurveFile c = load_validated(g_opts.curve, force);
    GroupContext ctx = make_group_context(c.form, base_point_of(c, g_opts.O));
    ProjPoint r = add(ctx, parse_point(g_opts.P), parse_point(g_opts.Q));
    emit(Json{{"result", point_to_json(r)}}, g_opts.out);
  });
  auto* g_neg = c_group->add_subcommand("neg", "-P");
  add_group_common(g_neg, false);
  g_neg->callback([&] {
    CurveFile c = load_validated(g_opts.curve, force);
    GroupContext ctx = make_group_context(c.form, base_point_of(c, g_opts.O));
    emit(Json{{"result", point_to_json(negate(ctx, parse_point(g_opts.P)))}}, g_opts.out);
  });
  auto* g_mul = c_group->add_subcommand("mul", "m * P");
  add_group_common(g_mul, false);
  g_mul->add_option("--m", g_opts.m)->required();
  g_mul->callback([&] {
    CurveFile c = load_validated(g_opts.curve, force);
    GroupContext ctx = make_group_context(c.form, base_point_of(c, g_opts.O));
    emit(Json{{"result", point_to_json(scalar_mul(ctx, g_opts.m, parse_point(g_opts.P)))}},
         g_opts.out);
  });
  auto* g_rel = c_group->add_subcommand("relation", "does [P] = m[Q] - (m-1)[R] hold");
  g_rel->add_option("--curve", g_opts.curve)->required();
  g_rel->add_option("--P", g_opts.P)->required();
  g_rel->add_option("--Q", g_opts.Q)->required();
  g_rel->add_option("--R", g_opts.R)->required();
  g_rel->add_option("--m", g_opts.m)->required();
  g_rel->add_option("--out", g_opts.out);
  g_rel->callback([&] {
    CurveFile c = load_validated(g_opts.curve, force);
    bool holds = check_divisor_relation(c.form, g_opts.m, parse_point(g_opts.P),
                                        parse_point(g_opts.Q), parse_point(g_opts.R));
    emit(Json{{"holds", holds}}, g_opts.out);
  });

  // ---- classes -------------------------------------------------------------
  auto* c_classes = app.add_subcommand("classes", "m-division equivalence classes");
  struct {
    std::string curve, out;
    long m = 2;
    long B = 50;
    int search_mult = 4;
  } cl_opts;
  c_classes->add_option("--curve", cl_opts.curve)->required();
  c_classes->add_option("--m", cl_opts.m)->required();
  c_classes->add_option("--B", cl_opts.B);
  c_classes->add_option("--search-mult", cl_opts.search_mult);
  c_classes->add_option("--out", cl_opts.out);
  c_classes->callback([&] {
    CurveFile c = load_validated(cl_opts.curve, force);
    auto points = enumerate_rational_points(c.form, cl_opts.B);
    if (points.empty()) {
      emit(Json{{"m", cl_opts.m}, {"classes", Json::array()}, {"count", 0}}, cl_opts.out);
      return;
    }
    ProjPoint base = c.base_point ? *c.base_point : points.front();
    GroupContext ctx = make_group_context(c.form, base);
    auto search = seeds_with_multiples(ctx, points, cl_opts.search_mult);
    auto part = partition_classes(points, cl_opts.m, ctx, search);
    emit(partition_to_json(part, c.rank), cl_opts.out);
  });

  // ---- xpoints -------------------------------------------------------------
  auto* c_xp = app.add_subcommand("xpoints", "pairs (mQ - (m-1)R, Q) from seed points");
  struct {
    std::string curve, R, out;
    long m = 2;
    long B = 50;
    int mult = 4;
    std::size_t cap = 64;
  } xp_opts;
  c_xp->add_option("--curve", xp_opts.curve)->required();
  c_xp->add_option("--m", xp_opts.m)->required();
  c_xp->add_option("--B", xp_opts.B);
  c_xp->add_option("--R", xp_opts.R, "anchor point (defaults to the fixture base point)");
  c_xp->add_option("--mult", xp_opts.mult, "seed multiples cap");
  c_xp->add_option("--cap", xp_opts.cap);
  c_xp->add_option("--out", xp_opts.out);
  c_xp->callback([&] {
    CurveFile c = load_validated(xp_opts.curve, force);
    ProjPoint r = base_point_of(c, xp_opts.R);
    GroupContext ctx = make_group_context(c.form, r);
    auto points = enumerate_rational_points(c.form, xp_opts.B);
    auto seeds = seeds_with_multiples(ctx, points, xp_opts.mult);
    auto pairs = build_x_points(c.form, r, xp_opts.m, seeds, xp_opts.cap);
    emit_text(xpairs_csv(pairs, c), xp_opts.out);
  });

  // ---- detmethod -------------------------------------------------------------
  auto* c_det = app.add_subcommand("detmethod", "run the determinant-method pipeline");
  struct {
    std::string curve, R, out;
    long m = 1;
    long B = 1000;
    double A = 0;
    double u = 1.0;
    std::uint64_t q = 0;
    std::uint64_t prime_limit = 0;
    int a_override = 0;
    int seed_mult = 3;
    std::size_t cap = 64;
    bool minors = false;
  } dm;
  c_det->add_option("--curve", dm.curve)->required();
  c_det->add_option("--m", dm.m)->required();
  c_det->add_option("--B", dm.B)->required();
  c_det->add_option("--R", dm.R, "anchor point (defaults to the fixture base point)");
  c_det->add_option("--A", dm.A, "height-propagation exponent (default: empirical estimate)");
  c_det->add_option("--u", dm.u);
  c_det->add_option("--q", dm.q, "witness prime for the monomial basis");
  c_det->add_option("--prime-limit", dm.prime_limit);
  c_det->add_option("--a", dm.a_override, "force the working bidegree a");
  c_det->add_option("--seed-mult", dm.seed_mult);
  c_det->add_option("--cap", dm.cap);
  c_det->add_flag("--minors", dm.minors, "certify every s-row minor when N - s <= 2");
  c_det->add_option("--out", dm.out);
  c_det->callback([&] {
    CurveFile c = load_validated(dm.curve, force);
    ProjPoint r = base_point_of(c, dm.R);
    ExperimentConfig cfg;
    if (dm.A > 0) cfg.A = dm.A;
    cfg.u = dm.u;
    if (dm.q != 0) cfg.q = dm.q;
    if (dm.prime_limit != 0) cfg.prime_limit = dm.prime_limit;
    if (dm.a_override > 0) cfg.a_override = dm.a_override;
    cfg.seed_multiples = dm.seed_mult;
    cfg.pair_cap = dm.cap;
    cfg.seed = seed;
    cfg.certify_all_minors = dm.minors;
    ExperimentReport rep = run_experiment(c.form, r, dm.m, dm.B, cfg);
    if (c.name) rep.curve_name = *c.name;
    emit(experiment_report_to_json(rep), dm.out);
  });

  // ---- bounds ---------------------------------------------------------------
  auto* c_bounds = app.add_subcommand("bounds", "closed-form bound arithmetic");
  c_bounds->require_subcommand(1);
  struct {
    std::string curve, out, B = "1000", pi = "2";
    long r = 0;
    long m = 0;
    double A = 6.0, u = 1.0;
    std::uint64_t s = 100;
    std::size_t n_observed = 0;
    std::uint64_t scan = 10000;
  } b_opts;
  auto* b_t1 = c_bounds->add_subcommand("theorem1", "uniform bound value");
  b_t1->add_option("--B", b_opts.B)->required();
  b_t1->add_option("--r", b_opts.r);
  b_t1->add_option("--m", b_opts.m, "0 selects the optimal m");
  b_t1->add_option("--out", b_opts.out);
  b_t1->callback([&] {
    BoundInputs in;
    in.B = BigInt(b_opts.B);
    in.r = b_opts.r;
    in.m = b_opts.m > 0 ? b_opts.m : optimal_m(in.B);
    emit(theorem1_to_json(in, theorem1_bound(in)), b_opts.out);
  });
  auto* b_om = c_bounds->add_subcommand("optimal-m", "1 + floor(sqrt(log B))");
  b_om->add_option("--B", b_opts.B)->required();
  b_om->add_option("--out", b_opts.out);
  b_om->callback([&] {
    BigInt B(b_opts.B);
    emit(Json{{"B", B.get_str()}, {"m", optimal_m(B)}}, b_opts.out);
  });
  auto* b_params = c_bounds->add_subcommand("params", "working parameters a, b, s");
  b_params->add_option("--B", b_opts.B)->required();
  b_params->add_option("--m", b_opts.m)->required();
  b_params->add_option("--A", b_opts.A);
  b_params->add_option("--u", b_opts.u);
  b_params->add_option("--out", b_opts.out);
  b_params->callback([&] {
    BigInt B(b_opts.B);
    auto pc = parameter_choice(B, b_opts.m, BigRat(b_opts.A), BigRat(b_opts.u));
    emit(parameter_choice_to_json(B, b_opts.m, pc), b_opts.out);
  });
  auto* b_mert = c_bounds->add_subcommand("mertens", "prime log sums up to s");
  b_mert->add_option("--s", b_opts.s)->required();
  b_mert->add_option("--out", b_opts.out);
  b_mert->callback([&] { emit(mertens_to_json(mertens_diagnostics(b_opts.s)), b_opts.out); });
  auto* b_l8 = c_bounds->add_subcommand("lemma8", "prime divisor log sum bound");
  b_l8->add_option("--Pi", b_opts.pi)->required();
  b_l8->add_option("--out", b_opts.out);
  b_l8->callback([&] {
    BigInt pi(b_opts.pi);
    emit(lemma8_to_json(pi, lemma8_check(pi)), b_opts.out);
  });
  auto* b_t9 = c_bounds->add_subcommand("theorem9", "successive-minima exponent table");
  b_t9->add_option("--r", b_opts.r)->required();
  b_t9->add_option("--out", b_opts.out);
  b_t9->callback([&] { emit(theorem9_to_json(theorem9_exponent(b_opts.r)), b_opts.out); });
  auto* b_diag = c_bounds->add_subcommand("diagnostics", "norm and bad-prime ratios");
  b_diag->add_option("--curve", b_opts.curve)->required();
  b_diag->add_option("--B", b_opts.B)->required();
  b_diag->add_option("--N", b_opts.n_observed)->required();
  b_diag->add_option("--scan-bound", b_opts.scan);
  b_diag->add_option("--out", b_opts.out);
  b_diag->callback([&] {
    CurveFile c = load_validated(b_opts.curve, force);
    auto d = reduction_diagnostics(c.form, BigInt(b_opts.B), b_opts.n_observed, b_opts.scan);
    emit(reduction_diagnostics_to_json(d), b_opts.out);
  });

  // ---- growth ------------------------------------------------------------------
  auto* c_growth = app.add_subcommand("growth", "N(B) against the uniform bound over a B grid");
  struct { std::string curve, grid, out; } gr_opts;
  c_growth->add_option("--curve", gr_opts.curve)->required();
  c_growth->add_option("--B-grid", gr_opts.grid, "comma separated list of B values")->required();
  c_growth->add_option("--out", gr_opts.out);
  c_growth->callback([&] {
    CurveFile c = load_validated(gr_opts.curve, force);
    long r = c.rank.value_or(0);
    std::ostringstream os;
    os << "B,N,theorem1_bound,logB_pow\n";
    std::stringstream ss(gr_opts.grid);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      BigInt B(tok);
      auto pts = enumerate_rational_points(c.form, B);
      BoundInputs in;
      in.B = B;
      in.r = r;
      in.m = optimal_m(B);
      double bound = theorem1_bound(in).value;
      double logb = Real::log(Real::of(B)).to_double();
      double denom = std::pow(logb, 2.0 + static_cast<double>(r) / 2.0);
      os << B.get_str() << "," << pts.size() << "," << bound << "," << denom << "\n";
    }
    emit_text(os.str(), gr_opts.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    Json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return rc;
}
