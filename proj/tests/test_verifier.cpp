#include <doctest.h>

#include <cstdlib>

#include "schur/errors.hpp"
#include "schur/verifier.hpp"

using namespace schur;

TEST_CASE("S3 campaign is clean") {
  const auto cfg = default_gen_config(CaseId::S3, StructureId::RealMul, 1);
  const auto rep = run_campaign(CaseId::S3, cfg, 10000, 1, kScalarTol);
  CHECK(rep.violations.empty());
  CHECK(rep.min_margin >= -kScalarTol);
  CHECK(rep.min_margin_witness.has_value());
}

TEST_CASE("empty campaign") {
  const auto cfg = default_gen_config(CaseId::S3, StructureId::RealMul, 1);
  const auto rep = run_campaign(CaseId::S3, cfg, 0, 1, kScalarTol);
  CHECK(rep.violations.empty());
  CHECK(std::isinf(rep.min_margin));
  CHECK_FALSE(rep.min_margin_witness.has_value());
}

TEST_CASE("R6 ring campaign is clean") {
  const auto cfg = default_gen_config(CaseId::R6, StructureId::MatmulCommuting, 4);
  CHECK(run_campaign(CaseId::R6, cfg, 1000, 1, kMatrixTol).violations.empty());
}

TEST_CASE("incompatible case and structure") {
  const auto s4 = default_gen_config(CaseId::S4, StructureId::Frobenius, 3);
  CHECK_THROWS_AS(run_campaign(CaseId::S4, s4, 5, 0, kScalarTol), ConfigError);
  auto cfg = default_gen_config(CaseId::R6, StructureId::Hadamard, 1);
  cfg.dim = 2;
  cfg.structure = StructureDescriptor::hadamard();
  Rng rng(0);
  CHECK_THROWS_AS(generate_instance(CaseId::R6, cfg, rng), ConfigError);
}

TEST_CASE("campaign results do not depend on THREADS") {
  const auto cfg = default_gen_config(CaseId::C3, StructureId::Frobenius, 3);
  setenv("THREADS", "1", 1);
  const auto a = run_campaign(CaseId::C3, cfg, 300, 5, kMatrixTol);
  setenv("THREADS", "4", 1);
  const auto b = run_campaign(CaseId::C3, cfg, 300, 5, kMatrixTol);
  unsetenv("THREADS");
  CHECK(a.min_margin == b.min_margin);
  CHECK(a.skipped == b.skipped);
  REQUIRE(a.min_margin_witness.has_value());
  CHECK(a.min_margin_witness->trial == b.min_margin_witness->trial);
}

TEST_CASE("a planted violation is reported") {
  auto cfg = default_gen_config(CaseId::S6, StructureId::RealMul, 1);
  cfg.g_pool = {GFunctionSpec::sign()};
  cfg.finta_fraction = 0.0;
  const auto rep = run_campaign(CaseId::S6, cfg, 20000, 1, kScalarTol);
  // sign is claimed G2 but is not; some drawn instances expose it
  CHECK_FALSE(rep.violations.empty());
  for (const auto& w : rep.violations) CHECK(w.hypothesis_satisfied);
}

TEST_CASE("property: generated instances satisfy their hypotheses") {
  const CaseId scalar_ids[] = {CaseId::S2, CaseId::S3, CaseId::S3F, CaseId::S3V, CaseId::S3VG,
                               CaseId::S4, CaseId::S5, CaseId::S6,  CaseId::S7,  CaseId::QEQ};
  for (CaseId id : scalar_ids) {
    const auto cfg = default_gen_config(id, StructureId::RealMul, 1);
    for (std::uint64_t i = 0; i < 300; ++i) {
      Rng rng(2, i);
      const auto inst = generate_instance(id, cfg, rng);
      const auto h = check_hypothesis(id, inst, kScalarTol);
      CHECK_MESSAGE(h.satisfied, to_string(id), " trial ", i);
    }
  }
  for (CaseId id : {CaseId::C3, CaseId::C3P, CaseId::R4, CaseId::R5, CaseId::R6, CaseId::R7}) {
    const auto cfg = default_gen_config(id, StructureId::MatmulCommuting, 3);
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(2, i);
      CHECK(check_hypothesis(id, generate_instance(id, cfg, rng), kMatrixTol).satisfied);
    }
  }
}
