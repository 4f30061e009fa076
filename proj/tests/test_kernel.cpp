#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "dqg/kernel.hpp"
#include "fixtures.hpp"

using namespace dqg;
using dqg::test::max_abs;

TEST_CASE("herm_eig matches Eigen's self-adjoint solver on random Hermitian matrices") {
  std::mt19937_64 rng(11);
  for (const Index n : {1, 2, 5, 12, 30}) {
    const CMatrix m = random_hermitian(n, rng);
    const auto e = herm_eig(m);
    const Eigen::SelfAdjointEigenSolver<CMatrix> ref(m);
    CHECK((e.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + ref.eigenvalues().cwiseAbs().maxCoeff()));
    CHECK(max_abs(e.vectors.adjoint() * e.vectors - CMatrix::Identity(n, n)) <= 1e-12);
    CHECK(max_abs(e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint() - m) <= 1e-12 * n);
    for (Index k = 1; k < n; ++k) CHECK(e.values(k - 1) <= e.values(k));
  }
}

TEST_CASE("herm_eig on real symmetric and single precision input") {
  Eigen::Matrix3d a;
  a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const auto e = herm_eig(a);
  // Eigenvalues of the path Laplacian: 2 - sqrt2, 2, 2 + sqrt2.
  CHECK(e.values(0) == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.values(2) == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-14));

  Eigen::Matrix2cf f;
  f << 1.0f, std::complex<float>(0, 1), std::complex<float>(0, -1), 1.0f;
  const auto ef = herm_eig(f, 1e-5);
  CHECK(ef.values(0) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(ef.values(1) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("herm_eig rejects non-Hermitian and non-square input") {
  CMatrix m(2, 2);
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(herm_eig(m), Error);
  CHECK_THROWS_AS(herm_eig(CMatrix(2, 3)), Error);
  CHECK(herm_eig(CMatrix(0, 0)).values.size() == 0);
}

TEST_CASE("herm_eig resolves degenerate spectra") {
  std::mt19937_64 rng(3);
  const CMatrix u = random_unitary(6, rng);
  RVector d(6);
  d << 1, 1, 1, 4, 4, 9;
  const CMatrix m = u * d.cast<cplx>().asDiagonal() * u.adjoint();
  const auto e = herm_eig(m);
  CHECK((e.values - d).cwiseAbs().maxCoeff() <= 1e-12);
  const auto clusters = cluster_eigenvalues(e.values, 1e-6);
  CHECK(clusters == std::vector<Index>{0, 3, 5, 6});
}

TEST_CASE("positive square roots and inverse square roots") {
  std::mt19937_64 rng(5);
  const CMatrix b = random_hermitian(7, rng);
  const CMatrix p = b * b + CMatrix::Identity(7, 7);
  const CMatrix s = positive_sqrt(p);
  CHECK(max_abs(s * s - p) <= 1e-11);
  CHECK(hermitian_defect(s) <= 1e-12);
  CHECK(max_abs(inverse_sqrt(p) * s - CMatrix::Identity(7, 7)) <= 1e-11);
  CHECK_THROWS_AS(positive_sqrt(-p), Error);
  CHECK_THROWS_AS(inverse_sqrt(CMatrix::Zero(3, 3)), Error);
}

TEST_CASE("rank, nullspace and range") {
  std::mt19937_64 rng(8);
  const CMatrix a = CMatrix::Random(6, 3);
  const CMatrix b = CMatrix::Random(3, 8);
  const CMatrix m = a * b;  // rank 3
  CHECK(numerical_rank(m) == 3);
  const CMatrix n = nullspace(m);
  CHECK(n.cols() == 5);
  CHECK(max_abs(m * n) <= 1e-12);
  CHECK(max_abs(n.adjoint() * n - CMatrix::Identity(5, 5)) <= 1e-12);
  const CMatrix r = range_basis(m);
  CHECK(r.cols() == 3);
  CHECK(max_abs(r * r.adjoint() * m - m) <= 1e-12);
  // A pure roundoff matrix has rank 0 with an absolute floor, rank 1 without.
  const CMatrix tiny = CMatrix::Constant(3, 3, 1e-17);
  CHECK(numerical_rank(tiny, 1e-9, 1.0) == 0);
  CHECK(numerical_rank(tiny, 1e-9) == 1);
  CHECK(numerical_rank(CMatrix::Zero(4, 4)) == 0);
}

TEST_CASE("solve_linear reports uniqueness and consistency") {
  CMatrix a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  CVector b(3);
  b << 1, 2, 3;
  const auto ok = solve_linear(a, b);
  CHECK(ok.status == SolveStatus::Unique);
  CHECK(std::abs(ok.x(0) - cplx(1)) <= 1e-13);
  CHECK(std::abs(ok.x(1) - cplx(2)) <= 1e-13);

  b(2) = 4;
  CHECK(solve_linear(a, b).status == SolveStatus::NoSolution);
  CHECK_THROWS_AS(solve_unique(a, b, 1e-9, "test"), Error);

  CMatrix c(1, 2);
  c << 1, 1;
  CVector d(1);
  d << 2;
  const auto many = solve_linear(c, d);
  CHECK(many.status == SolveStatus::NonUnique);
  CHECK(many.nullity == 1);
  // Minimum-norm solution.
  CHECK(std::abs(many.x(0) - cplx(1)) <= 1e-13);
}

TEST_CASE("random unitaries are unitary and seeded") {
  std::mt19937_64 r1(42), r2(42);
  const CMatrix u = random_unitary(9, r1);
  CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(9, 9)) <= 1e-12);
  CHECK(max_abs(u - random_unitary(9, r2)) == 0.0);
  CHECK(operator_norm(u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(condition_number(u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(condition_number(CMatrix::Zero(2, 2))));
}
