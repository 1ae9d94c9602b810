#include <doctest.h>

#include "schur/errors.hpp"
#include "schur/ordered.hpp"
#include "schur/random.hpp"
#include "schur/matrix_domain.hpp"

using namespace schur;

namespace {
OrderedElement M(std::initializer_list<double> d) { return OrderedElement::matrix(Matrix::diag(d)); }
}

TEST_CASE("cmp fixtures") {
  const auto x = M({1, 2});
  auto r = cmp(x, x, 1e-9);
  CHECK(r.tag == OrderTag::Equal);
  CHECK(r.margin == 0.0);

  r = cmp(M({2, 1}), M({1, 0}), 1e-9);
  CHECK(r.tag == OrderTag::Greater);
  CHECK(r.margin == doctest::Approx(1.0));

  CHECK(cmp(M({1, 0}), M({0, 1}), 1e-9).tag == OrderTag::Incomparable);
  CHECK(cmp(OrderedElement::scalar(1), OrderedElement::scalar(2), 1e-9).tag == OrderTag::Less);
  CHECK(cmp(OrderedElement::vector({1, 0}), OrderedElement::vector({0, 1}), 1e-9).tag == OrderTag::Incomparable);
}

TEST_CASE("cmp kind mismatch") {
  CHECK_THROWS_AS(cmp(OrderedElement::scalar(1), M({1}), 1e-9), DimensionError);
  CHECK_THROWS_AS(cmp(M({1, 2}), M({1}), 1e-9), DimensionError);
}

TEST_CASE("star fixtures") {
  const auto fro = StructureDescriptor::frobenius();
  const auto i2 = OrderedElement::matrix(Matrix::identity(2));
  CHECK(star(fro, i2, i2).as_scalar() == 2.0);

  const auto had = StructureDescriptor::hadamard();
  const auto m = OrderedElement::matrix(Matrix{{1, 2}, {2, 3}});
  CHECK(star(had, m, OrderedElement::zero_like(m)) == OrderedElement::zero_like(m));

  const auto kr = StructureDescriptor::kronecker();
  CHECK(star(kr, M({1, 2}), M({3, 4})).as_matrix() == Matrix::diag({3, 4, 6, 8}));

  CHECK_THROWS_AS(star(fro, M({1, 2}), M({1, 2, 3})), DimensionError);
}

TEST_CASE("pow_star fixtures") {
  CHECK(pow_star(StructureDescriptor::real_mul(), OrderedElement::scalar(3), 2).as_scalar() == 9.0);
  const auto m = OrderedElement::matrix(Matrix{{1, 2}, {2, 3}});
  CHECK(pow_star(StructureDescriptor::hadamard(), m, 1) == m);
  CHECK(pow_star(StructureDescriptor::matmul_commuting(), M({2, 3}), 3).as_matrix() == Matrix::diag({8, 27}));
  CHECK_THROWS_AS(pow_star(StructureDescriptor::frobenius(), m, 2), UnsupportedPower);
}

TEST_CASE("is_upper_bound fixtures") {
  CHECK(is_upper_bound(StructureDescriptor::real_mul(), OrderedElement::scalar(5), OrderedElement::scalar(-3), 1e-9));
  const auto fro = StructureDescriptor::frobenius();
  CHECK(is_upper_bound(fro, OrderedElement::matrix(Matrix::identity(2)), M({0.5, -0.5}), 1e-9));
  CHECK_FALSE(is_upper_bound(fro, M({1, 0}), M({0, 1}), 1e-9));
}

TEST_CASE("matmul commutator guard") {
  const auto s = StructureDescriptor::matmul_commuting();
  const auto a = OrderedElement::matrix(Matrix{{1, 1}, {1, 0}});
  const auto b = M({1, 2});
  CHECK_THROWS_AS(star(s, a, b), ConfigError);
  CHECK_NOTHROW(star(s, a, b, StarCheck::Trusted));
  const std::vector<OrderedElement> elems{a, b};
  CHECK_THROWS_AS(require_commuting(s, elems), ConfigError);
}

TEST_CASE("property: star is bilinear on every structure") {
  const StructureId ids[] = {StructureId::RealMul, StructureId::VecDot,   StructureId::VecBilinear,
                             StructureId::FuncQuad, StructureId::Frobenius, StructureId::Hadamard,
                             StructureId::Kronecker, StructureId::RKronecker};
  for (auto id : ids) {
    const auto s = StructureDescriptor::from_id(id, 3);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng(seed);
      auto draw = [&](ElementKind k) {
        if (k == ElementKind::Scalar) return OrderedElement::scalar(rng.normal());
        if (k == ElementKind::Vector) {
          std::vector<double> v(3);
          for (auto& e : v) e = rng.normal();
          return OrderedElement::vector(v, s.weights);
        }
        return OrderedElement::matrix(random_symmetric(rng, 3));
      };
      const auto a = draw(s.carrier_i), a2 = draw(s.carrier_i), b = draw(s.carrier_j);
      const double c = rng.normal();
      const auto lhs = star(s, a + c * a2, b);
      const auto rhs = star(s, a, b) + c * star(s, a2, b);
      CHECK((lhs - rhs).norm() <= 1e-12 * (1 + rhs.norm()));
    }
  }
}

TEST_CASE("property: ring structures have a star identity") {
  for (auto id : {StructureId::RealMul, StructureId::MatmulCommuting, StructureId::Hadamard, StructureId::Kronecker}) {
    const auto s = StructureDescriptor::from_id(id, 2);
    const auto x = id == StructureId::RealMul ? OrderedElement::scalar(1.5) : M({2, -1});
    const auto e = star_identity(s, x);
    REQUIRE(e.has_value());
    CHECK(pow_star(s, x, 0) == *e);
    if (id != StructureId::Kronecker) CHECK(star(s, *e, x) == x);
  }
}
