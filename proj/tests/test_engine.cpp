#include <doctest.h>

#include "schur/errors.hpp"
#include "schur/matrix_domain.hpp"
#include "schur/verifier.hpp"
#include "support.hpp"

using namespace schur;

namespace {

std::vector<OrderedElement> sc(std::initializer_list<double> v) {
  std::vector<OrderedElement> out;
  for (double x : v) out.push_back(OrderedElement::scalar(x));
  return out;
}

SchurInstance scalar_inst(std::initializer_list<double> xs, std::initializer_list<double> a,
                          GFunctionSpec g = GFunctionSpec::identity()) {
  SchurInstance inst;
  inst.xs = sc(xs);
  inst.coeffs = sc(a);
  inst.g = g;
  return inst;
}

}  // namespace

TEST_CASE("registry round trip") {
  for (const auto& c : registry()) {
    CHECK(parse_case_id(to_string(c.id)) == c.id);
    CHECK(&theorem_case(c.id) == &c);
  }
  CHECK_FALSE(parse_case_id("NOPE").has_value());
}

TEST_CASE("S3 fixtures") {
  CHECK(eval_margin(CaseId::S3, scalar_inst({3, 2, 1}, {1, 1, 1})).value == 3.0);
  CHECK(eval_margin(CaseId::S3, scalar_inst({2, 2, 2}, {1, -4, 2}, GFunctionSpec::abs_pow(2))).value == 0.0);
  // equal variables give 0 only when g(0) = 0; e^{|0|} = 1 leaves a + b + c
  CHECK(eval_margin(CaseId::S3, scalar_inst({2, 2, 2}, {1, -4, 2}, GFunctionSpec::exp_abs())).value == -1.0);
  CHECK(eval_margin(CaseId::S3, scalar_inst({2, 1, 0}, {1, 5, 1})).value == -1.0);
  CHECK_THROWS_AS(eval_margin(CaseId::S3, scalar_inst({2, 1}, {1, 1})), ConfigError);
}

TEST_CASE("S4 and S5 frozen values") {
  CHECK(eval_margin(CaseId::S4, scalar_inst({3, 2, 1, 0}, {1, 1, 1, 1})).value == 0.0);
  CHECK(eval_margin(CaseId::S5, scalar_inst({4, 3, 2, 1, 0}, {3, 1, 2, 1, 1})).value == 92.0);
}

TEST_CASE("Finta weights under S4, sum clause violated") {
  SchurInstance inst;
  inst.xs = sc({2.5, 2, 1, 0.2});
  inst.g = GFunctionSpec::identity();
  inst.coeffs = sc({});
  for (double w : build_coeffs(CoeffBuild::finta(0.01), std::vector<double>{2.5, 2, 1, 0.2}))
    inst.coeffs.push_back(OrderedElement::scalar(w));
  CHECK(eval_margin(CaseId::S4, inst).value == doctest::Approx(-1.224503420136709313).epsilon(1e-13));
  const auto h = check_hypothesis(CaseId::S4, inst, kScalarTol);
  CHECK_FALSE(h.satisfied);
  REQUIRE(h.failed.size() == 1);
  CHECK(h.failed[0] == "x1+x4>=x2+x3");
}

TEST_CASE("hypothesis fixtures") {
  CHECK(check_hypothesis(CaseId::S3, scalar_inst({3, 2, 1}, {1, 2, 1}), kScalarTol).satisfied);
  CHECK(check_hypothesis(CaseId::S4, scalar_inst({3, 2, 1, 0}, {1, 1, 1, 1}), kScalarTol).satisfied);
  const auto h = check_hypothesis(CaseId::S3, scalar_inst({2, 1, 0}, {1, 5, 1}), kScalarTol);
  CHECK_FALSE(h.satisfied);
  REQUIRE(h.failed.size() == 1);
  CHECK(h.failed[0] == "a+c>=|b|");
}

TEST_CASE("S6 with g = sign: every clause holds, margin -1") {
  const auto inst = scalar_inst({3, 2, 1, 1, 1, 0}, {1, 1, 0, 0, 1, 1}, GFunctionSpec::sign());
  CHECK(check_hypothesis(CaseId::S6, inst, kScalarTol).satisfied);
  CHECK(eval_margin(CaseId::S6, inst).value == -1.0);
}

TEST_CASE("build_coeffs fixtures") {
  CHECK(build_coeffs(CoeffBuild::finta(1), std::vector<double>{3, 2, 1, 0}) == std::vector<double>{3, 2, 1, 0});
  const auto id = CoeffFunctionSpec::power_weight(1);
  CHECK(build_coeffs(CoeffBuild::vornicu_general(id, 4, 0, 0.5), {}) == std::vector<double>{2, 2, 0});
  CHECK(build_coeffs(CoeffBuild::from_f(godunova_levin_example()), std::vector<double>{1, 0.5, 0}) ==
        std::vector<double>{1, 4, 1});
  CHECK_THROWS_AS(build_coeffs(CoeffBuild::finta(0.5), std::vector<double>{1, -1}), DomainError);
}

TEST_CASE("Q_g cross-check on the Godunova-Levin function") {
  const auto g = product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(0.5));
  const auto r = qeq_cross_check(godunova_levin_example(), g, 1, 0, 0.5, kScalarTol);
  CHECK(r.schur.value == doctest::Approx(std::sqrt(2.0) - 2).epsilon(1e-12));
  CHECK(r.qg.value < 0);
  CHECK(r.signs_agree);

  const auto cvx = CoeffFunctionSpec::convex_pwl({{0, 1}, {0.5, 0.25}, {1, 0.5}, {2, 3}});
  const auto q = qeq_cross_check(cvx, GFunctionSpec::identity(), 1.5, 0.25, 0.3, kScalarTol);
  CHECK(q.schur.value >= 0);
  CHECK(q.qg.value >= 0);
  CHECK(q.signs_agree);
}

TEST_CASE("reduction fixtures") {
  const auto r = decompose_reduction(CaseId::S5, scalar_inst({4, 3, 2, 1, 0}, {3, 1, 2, 1, 1}));
  CHECK(r.residual <= 1e-9 * r.direct.scale);
  const auto flat = decompose_reduction(CaseId::S5, scalar_inst({1, 1, 1, 1, 1}, {3, 1, 2, 1, 1}));
  CHECK(flat.residual == 0.0);
  for (const auto& p : flat.parts) CHECK(p.value == 0.0);
  CHECK_THROWS_AS(decompose_reduction(CaseId::S3, scalar_inst({3, 2, 1}, {1, 1, 1})), ConfigError);
}

TEST_CASE("property: reduction residual and nonnegative tail") {
  for (CaseId id : {CaseId::S5, CaseId::S7, CaseId::R5, CaseId::R7}) {
    const bool ring = !theorem_case(id).scalar;
    const auto cfg = default_gen_config(id, ring ? StructureId::MatmulCommuting : StructureId::RealMul, 3);
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng(7, i);
      const auto inst = generate_instance(id, cfg, rng);
      const auto r = decompose_reduction(id, inst);
      const double tol = cfg.structure.default_tol();
      CHECK(r.residual <= tol * r.direct.scale);
      CHECK_FALSE(r.parts[2].violates(tol));
    }
  }
}

TEST_CASE("diagonal reduction of ring cases") {
  SchurInstance inst;
  inst.structure = StructureDescriptor::matmul_commuting();
  for (auto d : {std::pair{3.0, 2.0}, {2.0, 1.0}, {1.0, 0.0}, {0.0, -1.0}})
    inst.xs.push_back(OrderedElement::matrix(Matrix::diag({d.first, d.second})));
  for (int i = 0; i < 4; ++i) inst.coeffs.push_back(OrderedElement::matrix(Matrix::identity(2)));
  inst.n = 1;
  const auto m = eval_margin(CaseId::R4, inst);
  CHECK(m.element->as_matrix().is_diagonal());
  CHECK(testing::diagonal_reduction_error(CaseId::R4, inst) == 0.0);

  for (CaseId id : {CaseId::R4, CaseId::R5, CaseId::R6, CaseId::R7}) {
    auto cfg = default_gen_config(id, StructureId::MatmulCommuting, 3);
    cfg.identity_basis = true;
    for (std::uint64_t i = 0; i < 50; ++i) {
      Rng rng(3, i);
      CHECK(testing::diagonal_reduction_error(id, generate_instance(id, cfg, rng)) <= 1e-12);
    }
  }
}
