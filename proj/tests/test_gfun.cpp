#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "schur/errors.hpp"
#include "schur/gfun.hpp"

using namespace schur;

namespace {
const double kProbes[] = {-7.5, -2, -1, -0.25, 0, 0.25, 1, 2, 7.5};
}

TEST_CASE("eval_g fixtures") {
  CHECK(eval_g(GFunctionSpec::sign(), -3) == -1.0);
  CHECK(eval_g(GFunctionSpec::sign(), 0) == 0.0);
  CHECK(eval_g(GFunctionSpec::abs_pow(2), -3) == 9.0);
  CHECK(eval_g(product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(0.5)), 0.25) == doctest::Approx(0.5));
}

TEST_CASE("product identities on probes") {
  const auto g = GFunctionSpec::exp_abs();
  const auto x3 = product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(3));
  const auto sq = product(GFunctionSpec::abs_pow(1), GFunctionSpec::abs_pow(1));
  for (double x : kProbes) {
    CHECK(product(GFunctionSpec::constant(1), g)(x) == doctest::Approx(g(x)));
    CHECK(x3(x) == doctest::Approx(x * x * x));
    CHECK(sq(x) == doctest::Approx(x * x));
  }
  CHECK(x3.odd());
  CHECK_FALSE(sq.odd());
}

TEST_CASE("name round trip over the library") {
  for (const auto& g : g_library()) {
    const auto back = parse_gfunction(g.name());
    REQUIRE(back.has_value());
    for (double x : kProbes) CHECK(eval_g(*back, x) == eval_g(g, x));
  }
  CHECK_FALSE(parse_gfunction("sinh").has_value());
}

TEST_CASE("certification fixtures") {
  const auto grid = GridPlan::defaults();
  CHECK(certify_class(GFunctionSpec::exp_abs(), GClass::G2, grid, 0).passed);
  CHECK(certify_class(GFunctionSpec::abs_pow(1), GClass::G2, grid, 0).passed);

  const auto sroot = product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(0.5));
  CHECK(certify_class(sroot, GClass::G, grid, 0).passed);
  const auto rep = certify_class(sroot, GClass::G2, grid, 0);
  CHECK_FALSE(rep.passed);
}

TEST_CASE("sign·√|x| at (2,1,1): sum inequality fails, product holds") {
  const auto g = product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(0.5));
  const double x = 2, y = 1, z = 1;
  // g(x)+g(y+z) <= g(y)+g(x+z) and g(y)g(x+z) <= g(x)g(y+z)
  const double sum = g(y) + g(x + z) - g(x) - g(y + z);
  const double prod = g(x) * g(y + z) - g(y) * g(x + z);
  CHECK(sum == doctest::Approx(-0.0963763171773128).epsilon(1e-12));
  CHECK(prod == doctest::Approx(0.2679491924311227).epsilon(1e-12));
}

TEST_CASE("sign is not in G2 despite the claim") {
  const auto g = GFunctionSpec::sign();
  CHECK(g.claimed() == GClass::G2);
  CHECK_FALSE(certify_class(g, GClass::G2, GridPlan::defaults(), 0).passed);
  CHECK(certify_class(g, GClass::G, GridPlan::defaults(), 0).passed);
  // y = 0: g(x) + g(z) = 2 > g(0) + g(x+z) = 1
  CHECK(g(1) + g(1) > g(0) + g(2));
}

TEST_CASE("certified library") {
  const auto& g2 = certified_library(GClass::G2);
  CHECK_FALSE(g2.empty());
  for (const auto& g : g2) CHECK(g != GFunctionSpec::sign());
  CHECK(std::find(g2.begin(), g2.end(), GFunctionSpec::exp_abs()) != g2.end());
  CHECK(certified_library(GClass::G).size() >= g2.size());
}

TEST_CASE("certify with an empty grid") {
  GridPlan grid = GridPlan::defaults();
  grid.magnitudes.clear();
  grid.random_triples = 0;
  grid.lemma3_samples = 0;
  CHECK_THROWS_AS(certify_class(GFunctionSpec::identity(), GClass::G, grid, 0), ConfigError);
}

TEST_CASE("godunova-levin example") {
  const auto f = godunova_levin_example();
  CHECK(f(0.5) == 4.0);
  CHECK(f(0) == 1.0);
  CHECK(f(0.5) == 2 * (f(0) + f(1)));
  CHECK_THROWS_AS(f(2), DomainError);
}

TEST_CASE("Q-class fixtures") {
  const auto gl = godunova_levin_example();
  CHECK(certify_qclass(gl, QVariant::q(), QSamplePlan::defaults(), 0).passed);

  auto plan = QSamplePlan::defaults();
  plan.extra.push_back({1, 0, 0.5});
  const auto sroot = product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(0.5));
  CHECK_FALSE(certify_qclass(gl, QVariant::qg(sroot), plan, 0).passed);
  const auto m = qclass_margin(gl, QVariant::qg(sroot), {1, 0, 0.5});
  CHECK(m.margin == doctest::Approx(-1.171572875253809902).epsilon(1e-12));

  const auto cvx = CoeffFunctionSpec::convex_pwl({{0, 1}, {0.5, 0.25}, {1, 0.5}, {2, 3}});
  CHECK(certify_qclass(cvx, QVariant::q(), QSamplePlan::defaults(), 0).passed);
  CHECK_THROWS_AS(certify_qclass(gl, QVariant::qg(GFunctionSpec::abs_pow(2)), plan, 0), ConfigError);
}

TEST_CASE("coefficient function validation") {
  CHECK_THROWS_AS(CoeffFunctionSpec::convex_pwl({{0, 0}, {1, 1}, {2, 1}}), ConfigError);
  CHECK_THROWS_AS(CoeffFunctionSpec::monotone_pwl({{0, 0}, {1, 1}, {2, 0}}), ConfigError);
  const auto w = CoeffFunctionSpec::power_weight(0.5);
  CHECK(w(0) == 0.0);
  CHECK(w(4) == doctest::Approx(2.0));
  CHECK_THROWS_AS(w(-1), DomainError);
}
