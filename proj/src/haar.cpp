#include "dqg/haar.hpp"

#include "dqg/kernel.hpp"

namespace dqg {

namespace {

double max_abs(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

CMatrix invariance_system(const QuantumGroup& qg, bool left) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  CMatrix a = CMatrix::Zero(d * d, d);
  for (const auto& e : qg.delta().entries()) {
    const Index k = e.source;
    const Index x = e.target / d;
    const Index y = e.target % d;
    // left: (id (x) f)Delta(e_k) has e_x-coefficient sum_y Delta f_y
    if (left)
      a(k * d + x, y) += e.value;
    else
      a(k * d + y, x) += e.value;
  }
  for (Index k = 0; k < d; ++k)
    for (Index j = 0; j < d; ++j)
      if (s.is_diagonal(j)) a(k * d + j, k) -= 1.0;
  return a;
}

CVector solve_invariant(const QuantumGroup& qg, bool left, double tol) {
  require_verified(qg);
  const CMatrix a = invariance_system(qg, left);
  const CMatrix ns = nullspace(a, tol, 1.0);
  if (ns.cols() != 1)
    throw Error(Errc::NonUnique, std::string(left ? "left" : "right") + " invariant functionals form a space of dimension " +
                                     std::to_string(ns.cols()));
  CVector f = ns.col(0);
  const double big = f.cwiseAbs().maxCoeff();
  for (Index k = 0; k < f.size(); ++k)
    if (std::abs(f(k)) > 1e-8 * big) {
      f *= std::conj(f(k)) / std::abs(f(k));
      break;
    }
  return f;
}

CVector algebra_apply(const CMatrix& m, const AlgebraElement& x) { return m * x.coefficients(); }

}  // namespace

cplx apply_functional(const CVector& f, const CVector& a) { return (f.transpose() * a)(0); }

CMatrix product_form(const BlockShape& s, const CVector& f) {
  const Index d = s.dim();
  CMatrix b = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      const Index p = basis_product(s, k, l);
      if (p >= 0) b(k, l) = f(p);
    }
  return b;
}

CounitBlock find_counit_block(const QuantumGroup& qg, double tol) {
  const BlockShape& s = qg.shape();
  std::vector<int> ones;
  for (int a = 0; a < s.block_count(); ++a)
    if (s.block_dim(a) == 1) ones.push_back(a);
  if (ones.empty()) throw Error(Errc::NotFound, "no one-dimensional block");
  const CVector eps = qg.epsilon_vector();

  std::vector<int> found;
  for (int a : ones) {
    const CVector e = s.block_identity(a);
    double r = 0.0;
    for (Index k = 0; k < s.dim(); ++k) {
      const CVector x = s.unit_vector(k);
      r = std::max(r, max_abs(CVector(multiply(s, e, x) - eps(k) * e)));
      r = std::max(r, max_abs(CVector(multiply(s, x, e) - eps(k) * e)));
    }
    if (r <= tol) found.push_back(a);
  }
  if (found.empty()) throw Error(Errc::NotFound, "no block absorbs the counit");
  if (found.size() > 1) throw Error(Errc::NotUnique, "several blocks absorb the counit");
  return {found[0], AlgebraElement::block_identity(s, found[0])};
}

CVector solve_left_haar(const QuantumGroup& qg, double tol) { return solve_invariant(qg, true, tol); }
CVector solve_right_haar(const QuantumGroup& qg, double tol) { return solve_invariant(qg, false, tol); }

double left_invariance_residual(const QuantumGroup& qg, const CVector& f) {
  const CVector r = invariance_system(qg, true) * f;
  return max_abs(r);
}

double right_invariance_residual(const QuantumGroup& qg, const CVector& f) {
  const CVector r = invariance_system(qg, false) * f;
  return max_abs(r);
}

std::vector<CMatrix> density_matrices(const BlockShape& s, const CVector& f) {
  std::vector<CMatrix> rho;
  for (int a = 0; a < s.block_count(); ++a) {
    const int n = s.block_dim(a);
    CMatrix r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(j, i) = f(s.index(a, i, j));
    rho.push_back(r);
  }
  return rho;
}

AlgebraElement compute_theta(const QuantumGroup& qg, const CVector& phi, const CVector& psi_raw, double tol) {
  require_verified(qg);
  const BlockShape& s = qg.shape();
  const auto rho = density_matrices(s, phi);
  const auto rho2 = density_matrices(s, psi_raw);

  AlgebraElement raw(s);
  AlgebraElement raw_inv(s);
  for (int a = 0; a < s.block_count(); ++a) {
    const CMatrix ri = inverse_sqrt(rho[static_cast<std::size_t>(a)], tol);
    const CMatrix rs = positive_sqrt(rho[static_cast<std::size_t>(a)], tol);
    const CMatrix m = ri * rho2[static_cast<std::size_t>(a)] * ri;
    if (hermitian_defect(m) > tol * (1.0 + m.cwiseAbs().maxCoeff()))
      throw Error(Errc::NotPositive, "right invariant functional is not a positive multiple of a weight");
    const CMatrix herm = (m + m.adjoint()) / 2.0;
    const CMatrix root = positive_sqrt(herm, tol);
    const CMatrix root_inv = inverse_sqrt(herm, tol);
    raw.block(a) = ri * root * rs;
    raw_inv.block(a) = ri * root_inv * rs;
  }

  const CVector s_raw = qg.antipode_matrix() * raw.coefficients();
  const CVector inv = raw_inv.coefficients();
  const cplx num = s_raw.dot(inv);
  const double den = s_raw.squaredNorm();
  if (den == 0.0 || num.real() <= 0.0) throw Error(Errc::ScaleInconsistent, "S(theta) has no positive multiple equal to theta^-1");
  const double c2 = num.real() / den;
  if ((c2 * s_raw - inv).norm() > tol * (1.0 + inv.norm()))
    throw Error(Errc::ScaleInconsistent, "no scalar achieves S(theta) = theta^-1");
  return std::sqrt(c2) * raw;
}

HaarData compute_haar(const QuantumGroup& qg, const Config& cfg) {
  require_verified(qg);
  const double tol = cfg.tol;
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  HaarData h;
  h.mode = cfg.mode;

  const CounitBlock cb = find_counit_block(qg, tol);
  h.alpha0 = cb.alpha0;
  h.h0 = cb.h0;

  CVector phi = solve_left_haar(qg, tol);
  const cplx norm = cfg.mode == HaarNormalization::CounitBlock ? apply_functional(phi, h.h0.coefficients())
                                                               : apply_functional(phi, s.identity());
  if (std::abs(norm) == 0.0) throw Error(Errc::NotPositive, "Haar functional vanishes on the normalising element");
  phi /= norm;
  h.phi = phi;
  h.rho = density_matrices(s, phi);

  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& r : h.rho) min_eig = std::min(min_eig, herm_eig(r, tol).values(0));
  if (!(min_eig > 0.0)) throw Error(Errc::NotPositive, "Haar functional is not faithful and positive");

  const CVector psi_raw = solve_right_haar(qg, tol);
  h.theta = compute_theta(qg, phi, psi_raw, tol);
  h.theta_inv = AlgebraElement(s);
  for (int a = 0; a < s.block_count(); ++a) h.theta_inv.block(a) = h.theta.block(a).inverse();

  const AlgebraElement theta2 = h.theta * h.theta;
  h.psi.resize(d);
  for (Index k = 0; k < d; ++k) h.psi(k) = apply_functional(phi, multiply(s, s.unit_vector(k), theta2.coefficients()));

  // Identities, each over the full basis.
  const double scale = 1.0 + max_abs(phi);
  const CMatrix& sm = qg.antipode_matrix();
  const CMatrix s2 = sm * sm;
  const CVector eps = qg.epsilon_vector();
  auto& rep = h.identities;

  rep.add("left_invariance", left_invariance_residual(qg, phi), tol * scale);
  rep.add("right_invariance", right_invariance_residual(qg, h.psi), tol * scale);

  double psi_left = 0.0;
  for (Index k = 0; k < d; ++k)
    psi_left = std::max(psi_left, std::abs(h.psi(k) - apply_functional(phi, multiply(s, theta2.coefficients(), s.unit_vector(k)))));
  rep.add("psi_equals_phi_theta2", psi_left, tol * scale);

  const CVector dtheta = map_as_matrix(qg.delta()) * h.theta.coefficients();
  rep.add("delta_theta", max_abs(CVector(dtheta - tensor_product(h.theta, h.theta).coefficients())), tol);
  rep.add("antipode_theta", max_abs(CVector(algebra_apply(sm, h.theta) - h.theta_inv.coefficients())), tol);

  double s2res = 0.0;
  double phis2 = 0.0;
  double psis2 = 0.0;
  for (Index k = 0; k < d; ++k) {
    const CVector ek = s.unit_vector(k);
    const CVector conj = multiply(s, multiply(s, h.theta_inv.coefficients(), ek), h.theta.coefficients());
    s2res = std::max(s2res, max_abs(CVector(s2.col(k) - conj)));
    phis2 = std::max(phis2, std::abs(apply_functional(phi, s2.col(k)) - phi(k)));
    psis2 = std::max(psis2, std::abs(apply_functional(h.psi, s2.col(k)) - h.psi(k)));
  }
  rep.add("antipode_squared", s2res, tol);
  rep.add("phi_antipode_squared", phis2, tol * scale);
  rep.add("psi_antipode_squared", psis2, tol * scale);

  const CVector h0 = h.h0.coefficients();
  double absorb = 0.0;
  for (Index k = 0; k < d; ++k) {
    const CVector ek = s.unit_vector(k);
    absorb = std::max(absorb, max_abs(CVector(multiply(s, h0, ek) - eps(k) * h0)));
    absorb = std::max(absorb, max_abs(CVector(multiply(s, ek, h0) - eps(k) * h0)));
  }
  rep.add("h0_absorbs_counit", absorb, tol);
  if (cfg.mode == HaarNormalization::CounitBlock)
    rep.add("phi_h0_is_one", std::abs(apply_functional(phi, h0) - 1.0), tol);
  else
    rep.add("phi_one_is_one", std::abs(apply_functional(phi, s.identity()) - 1.0), tol);
  rep.add_flag("phi_faithful", min_eig > 0.0);
  return h;
}

CMatrix slice_id_phi(const OperatorTensor& x, const HaarData& haar) {
  if (static_cast<int>(haar.rho.size()) != x.shape().block_count())
    throw Error(Errc::ShapeMismatch, "slice_id_phi: operator and functional live on different algebras");
  const Index hd = x.hdim();
  CMatrix out = CMatrix::Zero(hd, hd);
  for (int a = 0; a < x.shape().block_count(); ++a) {
    const int n = x.shape().block_dim(a);
    const CMatrix& rho = haar.rho[static_cast<std::size_t>(a)];
    if (rho.rows() != n) throw Error(Errc::ShapeMismatch, "slice_id_phi: block size mismatch");
    const CMatrix& blk = x.block(a);
    for (Index h = 0; h < hd; ++h)
      for (Index g = 0; g < hd; ++g) out(h, g) += (blk.block(h * n, g * n, n, n) * rho).trace();
  }
  return out;
}

}  // namespace dqg
