#include <doctest.h>

#include <cmath>

#include "schur/falsify.hpp"
#include "schur/oracle.hpp"

using namespace schur;

TEST_CASE("nelder_mead finds a quadratic minimum") {
  auto f = [](const std::vector<double>& x) { return (x[0] - 1) * (x[0] - 1) + 2 * (x[1] + 3) * (x[1] + 3); };
  const auto r = nelder_mead(f, {0, 0}, 1.0, 2000);
  CHECK(r.x[0] == doctest::Approx(1).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(-3).epsilon(1e-5));
  CHECK(r.evaluations <= 2000);
}

TEST_CASE("S3 violating region yields a witness") {
  FalsifyConfig cfg;
  cfg.id = CaseId::S3;
  cfg.region = Region::Violating;
  cfg.clause = "a+c>=|b|";
  cfg.seed = 1;
  const auto r = falsify(cfg);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->margin < 0);
  CHECK_FALSE(r.witness->hypothesis_satisfied);
  CHECK(oracle_margin_exact(CaseId::S3, r.witness->instance) < 0);
}

TEST_CASE("satisfying regions yield nothing") {
  for (CaseId id : {CaseId::S2, CaseId::S3, CaseId::S4, CaseId::S5}) {
    FalsifyConfig cfg;
    cfg.id = id;
    cfg.budget = 20000;
    cfg.seed = 3;
    const auto r = falsify(cfg);
    CHECK_FALSE(r.witness.has_value());
    CHECK(r.best_relative >= -10 * kScalarTol);
  }
}

TEST_CASE("property: satisfying parametrization stays in the hypothesis") {
  for (CaseId id : {CaseId::S2, CaseId::S3, CaseId::S4, CaseId::S5, CaseId::S6, CaseId::S7}) {
    FalsifyConfig cfg;
    cfg.id = id;
    const std::size_t n = param_count(cfg);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      std::vector<double> p(n);
      for (auto& v : p) v = 4 * rng.normal();
      const auto inst = instance_from_params(cfg, p);
      CHECK(check_hypothesis(id, inst, kScalarTol).satisfied);
    }
  }
}

TEST_CASE("necessity witnesses") {
  const auto suite = necessity_suite(1);
  REQUIRE(suite.size() == 3);
  CHECK(suite[0].witness.margin == -1.0);
  CHECK(oracle_margin_exact(suite[0].id, suite[0].witness.instance) == -1);
  CHECK(suite[1].witness.margin < -0.1);
  CHECK(suite[2].witness.margin == doctest::Approx(std::sqrt(2.0) - 2).epsilon(1e-12));
  for (const auto& w : suite) CHECK_FALSE(w.witness.hypothesis_satisfied);
}
