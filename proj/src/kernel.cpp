#include "dqg/kernel.hpp"

#include <Eigen/SVD>

namespace dqg {

namespace {

Eigen::JacobiSVD<CMatrix> full_svd(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Index rank_from_singular_values(const RVector& s, Index rows, Index cols, double tol, double floor = 0.0) {
  if (s.size() == 0) return 0;
  const double smax = std::max(s(0), floor);
  if (smax == 0.0) return 0;
  const double cut = tol * static_cast<double>(std::max(rows, cols)) * smax;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

}  // namespace

CMatrix positive_sqrt(const CMatrix& m, double tol) {
  const auto eig = herm_eig(m, tol);
  const double scale = 1.0 + (eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0);
  RVector root(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda < -tol * scale) throw Error(Errc::NotPositive, "negative eigenvalue in positive_sqrt");
    root(i) = lambda > 0 ? std::sqrt(lambda) : 0.0;
  }
  CMatrix r = eig.vectors * root.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  return (r + r.adjoint()) / 2.0;
}

CMatrix inverse_sqrt(const CMatrix& m, double tol) {
  const auto eig = herm_eig(m, tol);
  const double scale = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  RVector inv(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) <= tol * scale) throw Error(Errc::NotPositive, "matrix is not positive definite");
    inv(i) = 1.0 / std::sqrt(eig.values(i));
  }
  CMatrix r = eig.vectors * inv.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  return (r + r.adjoint()) / 2.0;
}

Index numerical_rank(const CMatrix& m, double tol, double floor) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(), tol, floor);
}

CMatrix nullspace(const CMatrix& m, double tol, double floor) {
  if (m.cols() == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::Identity(m.cols(), m.cols());
  const auto svd = full_svd(m);
  const Index r = rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(), tol, floor);
  return svd.matrixV().rightCols(m.cols() - r);
}

CMatrix range_basis(const CMatrix& m, double tol) {
  if (m.size() == 0) return CMatrix(m.rows(), 0);
  const auto svd = full_svd(m);
  const Index r = rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(), tol);
  return svd.matrixU().leftCols(r);
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const CMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

LinearSolution solve_linear(const CMatrix& a, const CVector& b, double tol) {
  if (a.rows() != b.size()) throw Error(Errc::ShapeMismatch, "solve_linear: rhs length != rows");
  LinearSolution out;
  if (a.cols() == 0) {
    out.x = CVector(0);
    out.residual = b.norm();
    out.status = out.residual > tol * (1.0 + b.norm()) ? SolveStatus::NoSolution : SolveStatus::Unique;
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = rank_from_singular_values(svd.singularValues(), a.rows(), a.cols(), tol);
  const RVector& s = svd.singularValues();
  CVector coeff = svd.matrixU().leftCols(r).adjoint() * b;
  for (Index i = 0; i < r; ++i) coeff(i) /= s(i);
  out.x = svd.matrixV().leftCols(r) * coeff;
  out.residual = (a * out.x - b).norm();
  out.nullity = a.cols() - r;
  if (out.residual > tol * (1.0 + b.norm()))
    out.status = SolveStatus::NoSolution;
  else if (out.nullity > 0)
    out.status = SolveStatus::NonUnique;
  else
    out.status = SolveStatus::Unique;
  return out;
}

CVector solve_unique(const CMatrix& a, const CVector& b, double tol, const char* what) {
  auto sol = solve_linear(a, b, tol);
  if (sol.status == SolveStatus::NoSolution) throw Error(Errc::NoSolution, what);
  if (sol.status == SolveStatus::NonUnique) throw Error(Errc::NonUnique, what);
  return sol.x;
}

CVector random_cvector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

CMatrix random_unitary(Index n, std::mt19937_64& rng) {
  CMatrix z(n, n);
  for (Index j = 0; j < n; ++j) z.col(j) = random_cvector(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  CMatrix z(n, n);
  for (Index j = 0; j < n; ++j) z.col(j) = random_cvector(n, rng);
  return (z + z.adjoint()) / 2.0;
}

std::vector<Index> cluster_eigenvalues(const RVector& ascending, double rel_gap) {
  std::vector<Index> starts;
  const Index n = ascending.size();
  if (n == 0) return {0};
  const double spread = ascending(n - 1) - ascending(0);
  starts.push_back(0);
  for (Index i = 1; i < n; ++i)
    if (ascending(i) - ascending(i - 1) > rel_gap * spread) starts.push_back(i);
  starts.push_back(n);
  return starts;
}

}  // namespace dqg
