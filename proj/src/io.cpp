#include "cubicount/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cubicount/real.hpp"

namespace cubicount {

namespace {

BigInt bigint_from_json(const Json& j) {
  if (j.is_string()) return BigInt(j.get<std::string>());
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
  throw std::invalid_argument("curve file: expected an integer or a decimal string");
}

ProjPoint point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("curve file: a point must be an array of three integers");
  std::array<BigInt, 3> raw;
  for (int i = 0; i < 3; ++i) raw[i] = bigint_from_json(j[i]);
  return normalize_point(raw);
}

}  // namespace

Json point_to_json(const ProjPoint& p) {
  Json out = Json::array();
  for (int i = 0; i < 3; ++i) out.push_back(p.x[i].get_str());
  return out;
}

CurveFile curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coefficients"))
    throw std::invalid_argument("curve file: missing \"coefficients\"");
  const Json& c = j["coefficients"];
  if (!c.is_array() || c.size() != 10)
    throw std::invalid_argument("curve file: \"coefficients\" must hold the 10 cubic monomials");
  std::array<BigInt, 10> coeffs;
  for (std::size_t i = 0; i < 10; ++i) coeffs[i] = bigint_from_json(c[i]);
  CurveFile out;
  out.form = CubicForm::from_coefficients(std::move(coeffs));
  if (j.contains("name")) out.name = j["name"].get<std::string>();
  if (j.contains("rank")) out.rank = j["rank"].get<long>();
  if (j.contains("base_point")) out.base_point = point_from_json(j["base_point"]);
  return out;
}

Json curve_to_json(const CurveFile& c) {
  Json j;
  if (c.name) j["name"] = *c.name;
  Json coeffs = Json::array();
  for (const BigInt& v : c.form.coeffs) coeffs.push_back(v.get_str());
  j["coefficients"] = coeffs;
  if (c.rank) j["rank"] = *c.rank;
  if (c.base_point) j["base_point"] = point_to_json(*c.base_point);
  return j;
}

CurveFile load_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open curve file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed curve JSON in " + path + ": " + e.what());
  }
  return curve_from_json(j);
}

std::string resolve_curve_path(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  if (const char* dir = std::getenv("CUBICOUNT_FIXTURE_DIR")) {
    fs::path p = fs::path(dir) / arg;
    if (fs::exists(p)) return p.string();
  }
  fs::path local = fs::path("fixtures") / arg;
  if (fs::exists(local)) return local.string();
  throw std::invalid_argument("curve file not found: " + arg);
}

FixtureCatalog load_catalog(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::path catalog_path = fs::path(dir) / "catalog.json";
  std::ifstream in(catalog_path);
  if (!in) throw std::invalid_argument("cannot open catalog: " + catalog_path.string());
  Json j;
  in >> j;
  FixtureCatalog out;
  for (const auto& name : j.value("curves", Json::array())) {
    CurveFile c = load_curve_file((fs::path(dir) / name.get<std::string>()).string());
    SmoothnessVerdict v = smoothness_verdict(c.form);
    if (v.kind == SmoothnessVerdict::Kind::SingularCertified)
      throw std::invalid_argument("catalog: singular fixture outside the negative section: " +
                                  name.get<std::string>());
    out.curves.push_back(std::move(c));
  }
  for (const auto& name : j.value("negative", Json::array())) {
    out.negative.push_back(load_curve_file((fs::path(dir) / name.get<std::string>()).string()));
  }
  return out;
}

std::string points_csv(const std::vector<ProjPoint>& pts) {
  std::ostringstream os;
  os << "x0,x1,x2\n";
  for (const ProjPoint& p : pts)
    os << p.x[0].get_str() << "," << p.x[1].get_str() << "," << p.x[2].get_str() << "\n";
  return os.str();
}

std::string xpairs_csv(const std::vector<XPair>& pairs, const CurveFile& curve) {
  Json header;
  header["m"] = pairs.empty() ? 0 : pairs.front().m;
  if (!pairs.empty()) header["R"] = point_to_json(pairs.front().r);
  header["curve"] = curve_to_json(curve);
  std::ostringstream os;
  os << "# " << header.dump() << "\n";
  os << "P.x0,P.x1,P.x2,Q.x0,Q.x1,Q.x2\n";
  for (const XPair& xp : pairs) {
    os << xp.p.x[0].get_str() << "," << xp.p.x[1].get_str() << "," << xp.p.x[2].get_str() << ","
       << xp.q.x[0].get_str() << "," << xp.q.x[1].get_str() << "," << xp.q.x[2].get_str() << "\n";
  }
  return os.str();
}

Json smoothness_to_json(const SmoothnessVerdict& v) {
  Json j;
  switch (v.kind) {
    case SmoothnessVerdict::Kind::SmoothCertified:
      j["verdict"] = "SmoothCertified";
      j["witness_prime"] = v.witness_prime;
      break;
    case SmoothnessVerdict::Kind::SingularCertified:
      j["verdict"] = "SingularCertified";
      j["singular_point"] = point_to_json(*v.singular_point);
      break;
    default:
      j["verdict"] = "Undetermined";
  }
  return j;
}

Json profile_to_json(const ReductionProfile& r) {
  Json j;
  j["scan_bound"] = r.scan_bound;
  Json bad = Json::array();
  for (std::size_t i = 0; i < r.bad_primes.size(); ++i) {
    Json e;
    e["p"] = r.bad_primes[i];
    e["singular_point"] = r.witnesses[i].to_string();
    bad.push_back(e);
  }
  j["bad_primes"] = bad;
  j["pi_c"] = r.pi_c.get_str();
  j["log_pi_c"] = r.pi_c == 1 ? 0.0 : log_to_double(r.pi_c);
  return j;
}

Json partition_to_json(const ClassPartition& part, std::optional<long> rank) {
  Json j;
  j["m"] = part.m;
  j["method"] = part.method_note;
  Json classes = Json::array();
  for (const auto& cl : part.classes) {
    Json c = Json::array();
    for (const auto& p : cl) c.push_back(point_to_json(p));
    classes.push_back(c);
  }
  j["classes"] = classes;
  j["count"] = part.classes.size();
  if (rank) {
    BigInt bound = 16 * pow_ui(BigInt(part.m), static_cast<unsigned long>(*rank));
    j["rank"] = *rank;
    j["rank_provenance"] = "fixture-supplied, unverified";
    j["bound_16_m_r"] = bound.get_str();
    j["within_bound"] = BigInt(part.classes.size()) <= bound;
  }
  return j;
}

Json certificate_to_json(const DivisibilityCertificate& c) {
  Json j;
  j["p"] = c.p;
  j["exponent"] = c.exponent;
  j["block_sizes"] = c.block_sizes;
  j["verified"] = c.verified;
  j["det_zero"] = c.det_zero;
  if (!c.det_zero) j["v_p_det"] = c.v_p_det;
  j["s_sq_over_2np"] = c.s_sq_over_2np;
  return j;
}

Json global_factor_to_json(const GlobalFactorReport& g) {
  Json j;
  j["T"] = g.t.get_str();
  j["log_T"] = g.log_t;
  j["det_zero"] = g.det_zero;
  if (!g.det_zero) j["log_abs_det"] = g.log_abs_det;
  if (g.divides_det) j["T_divides_det"] = *g.divides_det;
  if (g.log_bound_rhs) j["log_T_lower_diag"] = *g.log_bound_rhs;
  Json certs = Json::array();
  for (const auto& c : g.certificates) certs.push_back(certificate_to_json(c));
  j["certificates"] = certs;
  return j;
}

Json experiment_report_to_json(const ExperimentReport& rep) {
  Json j;
  if (!rep.curve_name.empty()) j["curve"] = rep.curve_name;
  j["form"] = rep.curve.to_string();
  j["m"] = rep.m;
  j["B"] = rep.B.get_str();
  j["R"] = point_to_json(rep.r);
  j["A"] = rep.a_exponent_used;
  j["u"] = rep.u;
  j["n_points"] = rep.n_points;
  j["n_pairs_all"] = rep.n_pairs_all;
  j["n_pairs_height_filtered"] = rep.pairs.size();
  j["height_exponent_estimate"] = rep.height_exponent_estimate;

  Json prescribed;
  prescribed["a"] = rep.prescribed_a.get_str();
  prescribed["b"] = rep.prescribed_b;
  prescribed["s"] = rep.prescribed_s.get_str();
  prescribed["size_inequality"] = Json{{"lhs_s", rep.prescribed_ineq8.lhs},
                                  {"rhs", rep.prescribed_ineq8.rhs},
                                  {"holds", rep.prescribed_ineq8.holds}};
  j["prescribed_parameters"] = prescribed;

  Json working;
  working["a"] = rep.a;
  working["b"] = rep.b;
  working["s"] = rep.s;
  working["scarcity_forced"] = rep.scarcity_forced;
  j["working_parameters"] = working;

  Json basis;
  basis["size"] = rep.basis.monomials.size();
  basis["witness_q"] = rep.basis.witness_q;
  basis["witness_rank"] = rep.basis.witness_rank;
  basis["sample_count"] = rep.basis.sample_count;
  Json mons = Json::array();
  for (const auto& mono : rep.basis.monomials) mons.push_back(mono.label());
  basis["monomials"] = mons;
  j["basis"] = basis;

  j["rank"] = rep.rank;
  j["delta_built"] = rep.delta_built;
  if (rep.delta_built) {
    j["det_zero"] = rep.det_zero;
    if (!rep.det_zero) {
      j["det_size_inequality"] = Json{{"log_abs_det", rep.log_abs_det},
                                      {"rhs", rep.ineq5_rhs},
                                      {"holds", rep.log_abs_det <= rep.ineq5_rhs}};
    }
    j["global_factor"] = global_factor_to_json(rep.global);
    if (!rep.minor_reports.empty()) {
      Json minors = Json::array();
      for (const auto& g : rep.minor_reports) minors.push_back(global_factor_to_json(g));
      j["all_minor_reports"] = minors;
    }
  }

  j["auxiliary_form_found"] = rep.aux_found;
  if (rep.aux_found) {
    Json aux;
    Json coeffs = Json::array();
    for (const BigInt& c : rep.aux->coeffs) coeffs.push_back(c.get_str());
    aux["coefficients"] = coeffs;
    aux["revalidated_on_pairs"] = rep.aux_rechecked;
    aux["nonvanishing_q"] = rep.aux->nonvanishing_q;
    aux["nonvanishing_sample"] = rep.aux->nonvanishing_sample.first.to_string() + "|" +
                                 rep.aux->nonvanishing_sample.second.to_string();
    j["auxiliary_form"] = aux;
  }

  j["bezout"] = Json{{"count", rep.bezout_count},
                     {"bound", rep.bezout_bound_value},
                     {"holds", rep.bezout_ok}};
  j["log_norm_ratio_30"] = rep.log_norm_ratio;
  j["n_le_9"] = rep.n_le_9;
  return j;
}

Json theorem1_to_json(const BoundInputs& in, const Theorem1Value& v) {
  Json j;
  j["B"] = in.B.get_str();
  j["r"] = in.r;
  j["m"] = in.m;
  j["value"] = v.value;
  j["m_pow_r"] = v.m_pow_r.get_str();
  j["exponent"] = v.exponent.get_str();
  j["B_pow"] = v.b_pow;
  j["log_B"] = v.log_b;
  j["rank_provenance"] = "fixture-supplied, unverified";
  return j;
}

Json parameter_choice_to_json(const BigInt& B, long m, const ParameterChoice& pc) {
  Json j;
  j["B"] = B.get_str();
  j["m"] = m;
  j["a"] = pc.a.get_str();
  j["b"] = pc.b;
  j["s"] = pc.s.get_str();
  j["size_inequality"] =
      Json{{"lhs_s", pc.ineq8_lhs}, {"rhs", pc.ineq8_rhs}, {"holds", pc.ineq8_holds}};
  return j;
}

Json mertens_to_json(const MertensDiagnostics& d) {
  Json j;
  j["s"] = d.s;
  j["sum_logp_over_p"] = d.sum_logp_over_p;
  j["log_s"] = d.log_s;
  j["deviation"] = d.deviation;
  j["sum_logp"] = d.sum_logp;
  j["chebyshev_ratio"] = d.chebyshev_ratio;
  return j;
}

Json lemma8_to_json(const BigInt& pi, const Lemma8Check& c) {
  Json j;
  j["Pi"] = pi.get_str();
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["holds"] = c.holds;
  return j;
}

Json theorem9_to_json(const Theorem9Report& rep) {
  Json j;
  j["r"] = rep.r;
  Json ml = Json::array();
  for (const auto& v : rep.m_values) ml.push_back(v.get_str());
  j["m_l"] = ml;
  Json sums = Json::array();
  for (const auto& v : rep.partial_sums) sums.push_back(v.get_str());
  j["partial_sums"] = sums;
  j["exponent"] = rep.exponent.get_str();
  j["exponent_decimal"] = mpq_get_d(rep.exponent.get_mpq_t());
  j["corollary_holds"] = rep.corollary_holds;
  return j;
}

Json reduction_diagnostics_to_json(const ReductionDiagnostics& d) {
  Json j;
  j["log_norm_f"] = d.log_norm_f;
  j["log_norm_ratio_30"] = d.log_norm_ratio;
  j["pi_c"] = d.pi_c.get_str();
  j["scan_bound"] = d.scan_bound;
  j["log_pi_c"] = d.log_pi_c;
  j["log_pi_ratio"] = d.log_pi_ratio;
  j["n_le_9"] = d.n_le_9;
  return j;
}

}  // namespace cubicount
