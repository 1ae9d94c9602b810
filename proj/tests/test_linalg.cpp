#include <doctest.h>

#include <algorithm>

#include "schur/linalg.hpp"
#include "schur/matrix_domain.hpp"
#include "schur/random.hpp"

using namespace schur;

TEST_CASE("kronecker of diagonals") {
  const Matrix k = kronecker(Matrix::diag({1, 2}), Matrix::diag({3, 4}));
  CHECK(k == Matrix::diag({3, 4, 6, 8}));
}

TEST_CASE("frobenius inner and trace") {
  const Matrix i2 = Matrix::identity(2);
  CHECK(frobenius_inner(i2, i2) == 2.0);
  CHECK(matmul(i2, Matrix{{1, 2}, {3, 4}}).trace() == 5.0);
}

TEST_CASE("jacobi on a known matrix") {
  // eigenvalues of [[2,1],[1,2]] are 1 and 3
  const auto ev = symmetric_eigenvalues(Matrix{{2, 1}, {1, 2}});
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("loewner_margin fixtures") {
  CHECK(loewner_margin(Matrix::identity(3)) == doctest::Approx(1.0));
  CHECK(loewner_margin(Matrix::diag({2, -1})) == doctest::Approx(-1.0));
  CHECK(loewner_margin(Matrix(3, 3)) == 0.0);
}

TEST_CASE("property: jacobi reconstructs random symmetric matrices") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + seed % 6;
    const Matrix a = random_symmetric(rng, n);
    const auto r = jacobi_eigen(a, true);
    CHECK(r.converged);
    Matrix back(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          back(i, j) += r.eigenvectors(i, k) * r.eigenvalues[k] * r.eigenvectors(j, k);
    CHECK((back - a).frobenius_norm() <= 1e-10 * (1 + a.frobenius_norm()));
    CHECK(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
  }
}

TEST_CASE("property: orthonormal_basis gives QᵀQ = I") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + seed % 5;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    const Matrix q = orthonormal_basis(a);
    CHECK((matmul(q.transpose(), q) - Matrix::identity(n)).max_abs() <= 1e-12);
  }
}

TEST_CASE("property: random_psd is PSD") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    CHECK(loewner_margin(random_psd(rng, 1 + seed % 5)) >= -1e-12);
  }
}
