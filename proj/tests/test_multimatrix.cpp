#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "dqg/kernel.hpp"
#include "dqg/multimatrix.hpp"
#include "fixtures.hpp"

using namespace dqg;
using dqg::test::max_abs;

namespace {

AlgebraElement random_element(const BlockShape& s, std::mt19937_64& rng) {
  return AlgebraElement::from_coefficients(s, random_cvector(s.dim(), rng));
}

}  // namespace

TEST_CASE("canonical basis order") {
  const BlockShape s({1, 2, 3});
  CHECK(s.dim() == 14);
  CHECK(s.offset(0) == 0);
  CHECK(s.offset(1) == 1);
  CHECK(s.offset(2) == 5);
  CHECK(s.index(1, 1, 0) == 3);
  CHECK(s.index(2, 0, 2) == 7);
  for (Index k = 0; k < s.dim(); ++k) {
    const auto u = s.locate(k);
    CHECK(s.index(u.block, u.row, u.col) == k);
    CHECK(s.transpose_index(s.transpose_index(k)) == k);
    CHECK(s.is_diagonal(k) == (u.row == u.col));
  }
  CHECK(s.identity().sum() == cplx(6));
}

TEST_CASE("blockwise product agrees with coefficient product and left/right multiplication") {
  std::mt19937_64 rng(1);
  const BlockShape s({1, 2, 3});
  const AlgebraElement x = random_element(s, rng), y = random_element(s, rng);
  const AlgebraElement xy = x * y;
  for (int a = 0; a < s.block_count(); ++a) CHECK(max_abs(xy.block(a) - x.block(a) * y.block(a)) <= 1e-13);
  const CVector c = multiply(s, x.coefficients(), y.coefficients());
  CHECK(max_abs(c - xy.coefficients()) <= 1e-13);
  CHECK(max_abs(left_multiplication(s, x.coefficients()) * y.coefficients() - c) <= 1e-13);
  CHECK(max_abs(right_multiplication(s, y.coefficients()) * x.coefficients() - c) <= 1e-13);
  CHECK(max_abs(star(s, x.coefficients()) - x.adjoint().coefficients()) == 0.0);
  CHECK(max_abs_diff(mul(AlgebraElement::identity(s), x), x) == 0.0);
  // (xy)^* = y^* x^*
  CHECK(max_abs_diff((x * y).adjoint(), y.adjoint() * x.adjoint()) <= 1e-13);
  CHECK(operator_norm(AlgebraElement::matrix_unit(s, 2, 0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("tensor coefficients are Kronecker products") {
  std::mt19937_64 rng(2);
  const BlockShape a({1, 2}), b({2, 1});
  const AlgebraElement x = random_element(a, rng), y = random_element(b, rng);
  const TensorElement t = tensor_product(x, y);
  const CVector kron = Eigen::kroneckerProduct(x.coefficients(), y.coefficients());
  CHECK(max_abs(t.coefficients() - kron) <= 1e-14);
  const TensorElement back = TensorElement::from_coefficients(a, b, kron);
  CHECK(max_abs(back.coefficients() - kron) <= 1e-14);

  const AlgebraElement x2 = random_element(a, rng), y2 = random_element(b, rng);
  const CVector prod = tensor_multiply(a, b, kron, Eigen::kroneckerProduct(x2.coefficients(), y2.coefficients()).eval());
  CHECK(max_abs(prod - CVector(Eigen::kroneckerProduct((x * x2).coefficients(), (y * y2).coefficients()))) <= 1e-13);
  CHECK(max_abs(tensor_star(a, b, kron) -
                CVector(Eigen::kroneckerProduct(x.adjoint().coefficients(), y.adjoint().coefficients()))) <= 1e-14);
}

TEST_CASE("structure maps compose and tensor like their dense matrices") {
  std::mt19937_64 rng(3);
  const BlockShape s({1, 2});
  const Space sp = Space::algebra(s);
  const CMatrix m1 = CMatrix::Random(s.dim(), s.dim()), m2 = CMatrix::Random(s.dim(), s.dim());
  const StructureMap a = StructureMap::from_dense(sp, sp, m1), b = StructureMap::from_dense(sp, sp, m2);
  CHECK(max_abs(map_as_matrix(compose(a, b)) - m1 * m2) <= 1e-13);
  CHECK(max_abs(map_as_matrix(tensor(a, b)) - CMatrix(Eigen::kroneckerProduct(m1, m2))) <= 1e-13);
  CHECK(max_abs(map_as_matrix(a.adjoint()) - m1.adjoint()) == 0.0);
  CHECK(max_abs_diff(a - a, StructureMap::zero(sp, sp)) == 0.0);
  const auto round = StructureMap::from_entries(sp, sp, a.entries());
  CHECK(max_abs_diff(round, a) == 0.0);
  CHECK_THROWS_AS(compose(a, StructureMap::identity(Space::tensor(s, s))), Error);
}

TEST_CASE("flip and multiplication maps") {
  std::mt19937_64 rng(4);
  const BlockShape s({1, 2});
  const AlgebraElement x = random_element(s, rng), y = random_element(s, rng);
  const CVector xy = Eigen::kroneckerProduct(x.coefficients(), y.coefficients());
  const CVector yx = Eigen::kroneckerProduct(y.coefficients(), x.coefficients());
  CHECK(max_abs(apply_map(flip_map(s, s), xy) - yx) <= 1e-14);
  CHECK(max_abs(apply_map(multiplication_map(s), xy) - (x * y).coefficients()) <= 1e-13);
}

TEST_CASE("operator tensors: coefficients, products and adjoints") {
  std::mt19937_64 rng(5);
  const BlockShape s({1, 2});
  const Index h = 3;
  std::vector<CMatrix> c1, c2;
  for (Index k = 0; k < s.dim(); ++k) {
    c1.push_back(CMatrix::Random(h, h));
    c2.push_back(CMatrix::Random(h, h));
  }
  const OperatorTensor x = OperatorTensor::from_coefficients(h, s, c1), y = OperatorTensor::from_coefficients(h, s, c2);
  for (Index k = 0; k < s.dim(); ++k) CHECK(max_abs(x.coefficient(k) - c1[static_cast<std::size_t>(k)]) <= 1e-15);
  // (X Y)_k = sum_{i,j} X_i Y_j [e_i e_j = e_k]
  const OperatorTensor xy = x * y;
  for (Index k = 0; k < s.dim(); ++k) {
    CMatrix expect = CMatrix::Zero(h, h);
    for (Index i = 0; i < s.dim(); ++i)
      for (Index j = 0; j < s.dim(); ++j) {
        const CVector p = multiply(s, s.unit_vector(i), s.unit_vector(j));
        expect += p(k) * c1[static_cast<std::size_t>(i)] * c2[static_cast<std::size_t>(j)];
      }
    CHECK(max_abs(xy.coefficient(k) - expect) <= 1e-12);
  }
  const OperatorTensor xa = x.adjoint();
  for (Index k = 0; k < s.dim(); ++k)
    CHECK(max_abs(xa.coefficient(s.transpose_index(k)) - c1[static_cast<std::size_t>(k)].adjoint()) <= 1e-15);
  const OperatorTensor one = OperatorTensor::ampliate(CMatrix::Identity(h, h), s);
  CHECK(block_norm((one * x) - x) <= 1e-15);
}
