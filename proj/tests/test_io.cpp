#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cubicount/io.hpp"

using namespace cubicount;
namespace fs = std::filesystem;

namespace {

ProjPoint pt(long a, long b, long c) {
  return normalize_point(std::array<BigInt, 3>{BigInt(a), BigInt(b), BigInt(c)});
}

std::string fixture_dir() {
  const char* env = std::getenv("CUBICOUNT_FIXTURE_DIR");
  REQUIRE(env != nullptr);
  return env;
}

}  // namespace

TEST_CASE("curve JSON round trip") {
  CurveFile c = load_curve_file(fixture_dir() + "/f6.json");
  CHECK(c.name == "f6");
  CHECK(c.rank == 1);
  REQUIRE(c.base_point.has_value());
  CHECK(*c.base_point == pt(1, -1, 0));
  CHECK(c.form.coeffs[0] == 1);
  CHECK(c.form.coeffs[9] == -6);

  Json j = curve_to_json(c);
  CurveFile back = curve_from_json(j);
  CHECK(back.form.coeffs == c.form.coeffs);
  CHECK(back.rank == c.rank);
  CHECK(*back.base_point == *c.base_point);
}

TEST_CASE("malformed curve files are rejected") {
  fs::path dir = fs::temp_directory_path() / "cubicount_io_test";
  fs::create_directories(dir);

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_curve_file((dir / "broken.json").string()), std::invalid_argument);

  std::ofstream(dir / "short.json") << R"({"coefficients": ["1", "2"]})";
  CHECK_THROWS_AS(load_curve_file((dir / "short.json").string()), std::invalid_argument);

  std::ofstream(dir / "zero.json")
      << R"({"coefficients": ["0","0","0","0","0","0","0","0","0","0"]})";
  CHECK_THROWS_AS(load_curve_file((dir / "zero.json").string()), std::invalid_argument);

  CHECK_THROWS_AS(load_curve_file((dir / "missing.json").string()), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("integer coefficients are accepted alongside strings") {
  Json j;
  j["coefficients"] = Json::array({1, 0, 0, 0, 0, 0, 1, 0, 0, 1});
  CurveFile c = curve_from_json(j);
  CHECK(c.form.coeffs[0] == 1);
}

TEST_CASE("fixture catalog") {
  FixtureCatalog cat = load_catalog(fixture_dir());
  CHECK(cat.curves.size() == 3);
  CHECK(cat.negative.size() == 1);
  for (const CurveFile& c : cat.curves) {
    CHECK(smoothness_verdict(c.form).kind == SmoothnessVerdict::Kind::SmoothCertified);
  }
  CHECK(smoothness_verdict(cat.negative[0].form).kind ==
        SmoothnessVerdict::Kind::SingularCertified);

  // a singular curve outside the negative section violates the invariant
  fs::path dir = fs::temp_directory_path() / "cubicount_catalog_test";
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json")
      << R"({"coefficients": ["-1","0","-1","0","0","0","0","1","0","0"]})";
  std::ofstream(dir / "catalog.json") << R"({"curves": ["bad.json"], "negative": []})";
  CHECK_THROWS_AS(load_catalog(dir.string()), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("resolve_curve_path uses the fixture directory") {
  CHECK_NOTHROW(load_curve_file(resolve_curve_path("fermat.json")));
  CHECK_THROWS_AS(resolve_curve_path("no-such-curve.json"), std::invalid_argument);
}

TEST_CASE("points_csv") {
  std::vector<ProjPoint> pts = {pt(0, 1, -1), pt(1, -1, 0)};
  CHECK(points_csv(pts) == "x0,x1,x2\n0,1,-1\n1,-1,0\n");
}

TEST_CASE("xpairs_csv carries a JSON header") {
  CurveFile c = load_curve_file(fixture_dir() + "/fermat.json");
  auto pairs = build_x_points(c.form, pt(1, -1, 0), 2, {pt(1, 0, -1)}, 10);
  std::string csv = xpairs_csv(pairs, c);
  CHECK(csv.rfind("# {", 0) == 0);
  CHECK(csv.find("\"m\":2") != std::string::npos);
  CHECK(csv.find("P.x0,P.x1,P.x2,Q.x0,Q.x1,Q.x2") != std::string::npos);
  CHECK(csv.find("0,1,-1,1,0,-1") != std::string::npos);
}

TEST_CASE("experiment report serialization is stable") {
  CurveFile c = load_curve_file(fixture_dir() + "/fermat.json");
  ExperimentConfig cfg;
  cfg.A = 3.0;
  ExperimentReport rep = run_experiment(c.form, *c.base_point, 1, 50, cfg);
  rep.curve_name = *c.name;
  Json j = experiment_report_to_json(rep);
  CHECK(j["curve"] == "fermat");
  CHECK(j["n_points"] == 3);
  CHECK(j["working_parameters"]["s"] == 6);
  CHECK(j["auxiliary_form_found"] == true);
  CHECK(j["bezout"]["holds"] == true);
  // identical runs serialize identically
  ExperimentReport rep2 = run_experiment(c.form, *c.base_point, 1, 50, cfg);
  rep2.curve_name = *c.name;
  CHECK(experiment_report_to_json(rep2).dump() == j.dump());
}
