#include <doctest.h>

#include <cmath>

#include "schur/errors.hpp"
#include "schur/oracle.hpp"

using namespace schur;

namespace {
SchurInstance inst3(double x, double y, double z, double a, double b, double c) {
  SchurInstance i;
  i.xs = {OrderedElement::scalar(x), OrderedElement::scalar(y), OrderedElement::scalar(z)};
  i.coeffs = {OrderedElement::scalar(a), OrderedElement::scalar(b), OrderedElement::scalar(c)};
  i.g = GFunctionSpec::identity();
  return i;
}
}  // namespace

TEST_CASE("oracle fixtures") {
  CHECK(oracle_margin_exact(CaseId::S3, inst3(3, 2, 1, 1, 1, 1)) == 3);
  CHECK(oracle_margin_exact(CaseId::S3, inst3(2, 1, 0, 1, 5, 1)) == -1);
  CHECK(oracle_margin_exact(CaseId::S3, inst3(0.3, 0.3, 0.3, 1, -7, 2)) == 0);
}

TEST_CASE("exact conversion") {
  CHECK(exact(0.5) == mpq_class(1, 2));
  CHECK(exact(0.1) != mpq_class(1, 10));
  CHECK_THROWS_AS(exact(std::nan("")), ConfigError);
  CHECK_THROWS_AS(exact(INFINITY), ConfigError);
}

TEST_CASE("exact g and f") {
  CHECK(exact_g(GFunctionSpec::power(3), mpq_class(-1, 2)) == mpq_class(-1, 8));
  CHECK(exact_g(GFunctionSpec::sign(), 0) == 0);
  CHECK_THROWS_AS(exact_g(GFunctionSpec::exp_abs(), 1), ConfigError);
  CHECK(exact_f(godunova_levin_example(), mpq_class(1, 2)) == 4);
  CHECK(exact_f(CoeffFunctionSpec::power_weight(2), mpq_class(3, 2)) == mpq_class(9, 4));
}

TEST_CASE("property: all-equal variables give exactly 0 when g(0) = 0") {
  for (CaseId id : {CaseId::S2, CaseId::S3, CaseId::S4, CaseId::S5, CaseId::S6, CaseId::S7}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      Rng rng(9, i);
      auto inst = gen_rational_instance(id, rng);
      for (auto& x : inst.xs) x = inst.xs[0];
      inst.g = GFunctionSpec::power(1 + i % 5);
      CHECK(oracle_margin_exact(id, inst) == 0);
    }
  }
}

TEST_CASE("property: float evaluator agrees with the exact oracle") {
  const CaseId ids[] = {CaseId::S2, CaseId::S3, CaseId::S3F, CaseId::S3V, CaseId::S3VG,
                        CaseId::S4, CaseId::S5, CaseId::S6,  CaseId::S7,  CaseId::QEQ};
  for (CaseId id : ids) {
    std::size_t compared = 0;
    for (std::uint64_t i = 0; i < 300; ++i) {
      Rng rng(4, i);
      const auto inst = gen_rational_instance(id, rng);
      try {
        const auto m = eval_margin(id, inst);
        const double exact_value = oracle_margin_exact(id, inst).get_d();
        CHECK(std::abs(m.value - exact_value) <= 1e-12 * m.scale);
        ++compared;
      } catch (const SkippedSample&) {
      }
    }
    CHECK(compared >= 250);
  }
}
