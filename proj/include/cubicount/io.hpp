/**
 * @file io.hpp
 * @brief Curve files, fixture catalogs, CSV emission, and JSON report
 *        serialization. Big integers are serialized as decimal strings.
 */
#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "cubicount/bounds.hpp"
#include "cubicount/detmethod.hpp"

namespace cubicount {

using Json = nlohmann::ordered_json;

struct CurveFile {
  CubicForm form;
  std::optional<std::string> name;
  std::optional<long> rank;  // externally supplied, unverified
  std::optional<ProjPoint> base_point;
};

CurveFile curve_from_json(const Json& j);
Json curve_to_json(const CurveFile& c);
CurveFile load_curve_file(const std::string& path);

/// Resolve a --curve argument: the literal path first, then the fixture
/// directory from CUBICOUNT_FIXTURE_DIR, then ./fixtures.
std::string resolve_curve_path(const std::string& arg);

/// Named fixtures; curves in the main section must not be certifiably
/// singular. Singular fixtures live in the quarantined negative section.
struct FixtureCatalog {
  std::vector<CurveFile> curves;
  std::vector<CurveFile> negative;
};

FixtureCatalog load_catalog(const std::string& dir);

// ---- tabular output ---------------------------------------------------

std::string points_csv(const std::vector<ProjPoint>& pts);

/// CSV with a JSON header line carrying m, R, and the curve.
std::string xpairs_csv(const std::vector<XPair>& pairs, const CurveFile& curve);

// ---- report serialization ----------------------------------------------

Json point_to_json(const ProjPoint& p);
Json smoothness_to_json(const SmoothnessVerdict& v);
Json profile_to_json(const ReductionProfile& r);
Json partition_to_json(const ClassPartition& part, std::optional<long> rank);
Json certificate_to_json(const DivisibilityCertificate& c);
Json global_factor_to_json(const GlobalFactorReport& g);
Json experiment_report_to_json(const ExperimentReport& rep);
Json theorem1_to_json(const BoundInputs& in, const Theorem1Value& v);
Json parameter_choice_to_json(const BigInt& B, long m, const ParameterChoice& pc);
Json mertens_to_json(const MertensDiagnostics& d);
Json lemma8_to_json(const BigInt& pi, const Lemma8Check& c);
Json theorem9_to_json(const Theorem9Report& rep);
Json reduction_diagnostics_to_json(const ReductionDiagnostics& d);

}  // namespace cubicount
