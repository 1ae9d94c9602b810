#include <doctest.h>

#include "schur/report.hpp"

using namespace schur;

namespace {
const char* kLeading[] = {"version", "command", "case", "structure", "dim", "trials",
                          "seed",    "tol",     "min_margin", "violations", "wall_time_ms"};

void check_leading(const Json& j) {
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end() && i < std::size(kLeading); ++it, ++i) CHECK(it.key() == kLeading[i]);
  CHECK(i == std::size(kLeading));
}
}  // namespace

TEST_CASE("campaign report layout") {
  const auto cfg = default_gen_config(CaseId::S3, StructureId::RealMul, 1);
  const auto j = campaign_json(run_campaign(CaseId::S3, cfg, 50, 1, kScalarTol));
  check_leading(j);
  CHECK(j["version"] == kReportVersion);
  CHECK(j["case"] == "S3");
  CHECK(j["violations"].is_array());

  const auto empty = campaign_json(run_campaign(CaseId::S3, cfg, 0, 1, kScalarTol));
  CHECK(empty["min_margin"].is_null());
}

TEST_CASE("falsify report layout") {
  FalsifyConfig cfg;
  cfg.id = CaseId::S3;
  cfg.region = Region::Violating;
  cfg.clause = "a+c>=|b|";
  cfg.budget = 2000;
  const auto j = falsify_json(cfg, falsify(cfg), 0.0);
  check_leading(j);
  // violating-region witnesses are not hypothesis violations of the theorem
  CHECK(j["violations"].empty());
  CHECK(j["witness"].is_object());
}

TEST_CASE("element serialization") {
  CHECK(element_json(OrderedElement::scalar(2.5)) == Json(2.5));
  const auto m = element_json(OrderedElement::matrix(Matrix::diag({1, 2})));
  CHECK(m.dump().find("[1.0,0.0]") != std::string::npos);
}
