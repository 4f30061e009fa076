#pragma once

// Dense complex linear algebra shared by every other module: a cyclic Jacobi
// Hermitian eigensolver, positive square roots, numerical rank, nullspaces and
// least-squares solves with consistency/uniqueness diagnostics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include "dqg/config.hpp"
#include "dqg/error.hpp"

namespace dqg {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct HermEig {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<RealScalar, Eigen::Dynamic, 1> values;  // ascending
  MatrixX<Scalar> vectors;                               // columns, unitary
  int sweeps = 0;
};

/// Largest entrywise deviation from Hermitian symmetry, max |M - M^dagger|.
template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Cyclic Jacobi diagonalisation of a Hermitian (or real symmetric) matrix.
///
/// Sweeps the strictly upper triangle in row-major order, annihilating each
/// off-diagonal entry with a unitary plane rotation. Iterates until the
/// off-diagonal Frobenius norm falls below min(tol, 64 eps) * ||M||_F, so the
/// returned decomposition is accurate to roundoff even for loose `tol`.
/// Eigenvalues are returned in ascending order with matching eigenvector
/// columns.
template <typename Derived>
HermEig<typename Derived::Scalar> herm_eig(const Eigen::MatrixBase<Derived>& m,
                                           double tol = kDefaultTol, int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

  if (m.rows() != m.cols()) throw Error(Errc::NotHermitian, "matrix is not square");
  const Index n = m.rows();
  HermEig<Scalar> out;
  if (n == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  if (hermitian_defect(m) > RealScalar(tol) * std::max<RealScalar>(RealScalar(1), m.cwiseAbs().maxCoeff()))
    throw Error(Errc::NotHermitian, "max|M - M^dagger| exceeds tolerance");

  MatrixX<Scalar> a = (m + m.adjoint()) / RealScalar(2);
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);

  const RealScalar norm = a.norm();
  const RealScalar eps = std::numeric_limits<RealScalar>::epsilon();
  const RealScalar target = std::min<RealScalar>(RealScalar(tol), 64 * eps) * norm;

  auto off_norm = [&]() {
    RealScalar s = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < j; ++i) s += Eigen::numext::abs2(a(i, j));
    return std::sqrt(RealScalar(2) * s);
  };

  int sweep = 0;
  RealScalar off = off_norm();
  while (off > target) {
    if (sweep >= max_sweeps) {
      if (off <= RealScalar(tol) * norm) break;
      throw Error(Errc::NoConvergence, "Jacobi sweep limit exceeded");
    }
    bool rotated = false;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (Eigen::numext::abs(a(p, q)) <= eps * eps * norm) continue;
        Eigen::JacobiRotation<Scalar> rot;
        if (!rot.makeJacobi(a, p, q)) continue;
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        rotated = true;
      }
    }
    ++sweep;
    const RealScalar next = off_norm();
    if (!rotated || next >= off) {
      off = next;
      break;
    }
    off = next;
  }
  if (off > RealScalar(tol) * std::max<RealScalar>(norm, RealScalar(1)))
    throw Error(Errc::NoConvergence, "Jacobi iteration stalled");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    return Eigen::numext::real(a(x, x)) < Eigen::numext::real(a(y, y));
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = Eigen::numext::real(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]));
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweep;
  return out;
}

/// Hermitian positive semidefinite square root. Eigenvalues in [-tol, 0) are
/// clamped to zero; anything more negative is rejected.
CMatrix positive_sqrt(const CMatrix& m, double tol = kDefaultTol);

/// Hermitian inverse square root of a positive definite matrix.
CMatrix inverse_sqrt(const CMatrix& m, double tol = kDefaultTol);

/// Number of singular values exceeding tol * max(rows, cols) * max(sigma_max, floor).
/// With the default floor of 0 the cut is purely relative.
Index numerical_rank(const CMatrix& m, double tol = kDefaultTol, double floor = 0.0);

/// Orthonormal basis (columns) of the nullspace, same threshold as numerical_rank.
/// Pass floor = 1 when the entries are O(1) structure constants, so that a
/// matrix of pure roundoff counts as zero.
CMatrix nullspace(const CMatrix& m, double tol = kDefaultTol, double floor = 0.0);

/// Orthonormal basis (columns) of the column space.
CMatrix range_basis(const CMatrix& m, double tol = kDefaultTol);

/// Spectral norm (largest singular value).
double operator_norm(const CMatrix& m);

/// 2-norm condition number; infinity for singular input.
double condition_number(const CMatrix& m);

enum class SolveStatus { Unique, NonUnique, NoSolution };

struct LinearSolution {
  CVector x;           // minimum-norm least-squares solution
  SolveStatus status = SolveStatus::Unique;
  double residual = 0;  // ||A x - b||
  Index nullity = 0;
};

/// Least-squares solve of A x = b. Reports NoSolution when the residual
/// exceeds tol * (1 + ||b||) and NonUnique when A has a nontrivial nullspace.
LinearSolution solve_linear(const CMatrix& a, const CVector& b, double tol = kDefaultTol);

/// Like solve_linear but throws unless the solution exists and is unique.
CVector solve_unique(const CMatrix& a, const CVector& b, double tol, const char* what);

/// Haar-random unitary of size n (QR of a complex Gaussian matrix).
CMatrix random_unitary(Index n, std::mt19937_64& rng);

/// Random Hermitian matrix with standard complex Gaussian entries.
CMatrix random_hermitian(Index n, std::mt19937_64& rng);

/// Complex Gaussian vector.
CVector random_cvector(Index n, std::mt19937_64& rng);

/// Groups ascending eigenvalues into clusters separated by gaps larger than
/// rel_gap * spread; returns cluster start offsets plus a final end offset.
std::vector<Index> cluster_eigenvalues(const RVector& ascending, double rel_gap);

}  // namespace dqg
