#include "dqg/corep.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "dqg/kernel.hpp"

namespace dqg {

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

void require_shape(const QuantumGroup& qg, const Representation& r) {
  if (!(qg.shape() == r.shape()))
    throw Error(Errc::ShapeMismatch, "representation lives on " + r.shape().to_string() + ", quantum group on " +
                                         qg.shape().to_string());
}

void require_size(Index hdim) {
  if (hdim > kMaxHilbertDim)
    throw Error(Errc::TooLarge, "Hilbert space dimension " + std::to_string(hdim) + " exceeds " +
                                    std::to_string(kMaxHilbertDim));
}

CMatrix weighted_sum(const std::vector<CMatrix>& coeffs, const CVector& w, Index hdim) {
  CMatrix out = CMatrix::Zero(hdim, hdim);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (w(static_cast<Index>(k)) != cplx(0.0)) out += w(static_cast<Index>(k)) * coeffs[k];
  return out;
}

double coefficient_scale(const std::vector<CMatrix>& coeffs) {
  double s = 0.0;
  for (const auto& c : coeffs) s = std::max(s, max_abs(c));
  return 1.0 + s;
}

}  // namespace

Representation representation_from_coefficients(std::string name, const BlockShape& shape,
                                                const std::vector<CMatrix>& coeffs) {
  const Index hdim = coeffs.empty() ? 0 : coeffs.front().rows();
  return Representation(std::move(name), OperatorTensor::from_coefficients(hdim, shape, coeffs));
}

Representation trivial_representation(const BlockShape& shape, Index hdim) {
  return Representation("trivial", OperatorTensor::ampliate(CMatrix::Identity(hdim, hdim), shape));
}

Representation direct_sum(const Representation& a, const Representation& b) {
  if (!(a.shape() == b.shape())) throw Error(Errc::ShapeMismatch, "direct_sum: representations on different algebras");
  const Index ha = a.hdim(), hb = b.hdim();
  std::vector<CMatrix> coeffs;
  for (Index k = 0; k < a.shape().dim(); ++k) {
    CMatrix c = CMatrix::Zero(ha + hb, ha + hb);
    c.topLeftCorner(ha, ha) = a.u.coefficient(k);
    c.bottomRightCorner(hb, hb) = b.u.coefficient(k);
    coeffs.push_back(std::move(c));
  }
  return representation_from_coefficients(a.name + "+" + b.name, a.shape(), coeffs);
}

Representation conjugate(const Representation& r, const CMatrix& w) {
  if (w.rows() != r.hdim() || w.cols() != r.hdim()) throw Error(Errc::ShapeMismatch, "conjugate: wrong unitary size");
  std::vector<CMatrix> coeffs;
  for (Index k = 0; k < r.shape().dim(); ++k) coeffs.push_back(w * r.u.coefficient(k) * w.adjoint());
  return representation_from_coefficients(r.name, r.shape(), coeffs);
}

CheckReport check_representation(const QuantumGroup& qg, const Representation& r, double tol) {
  require_verified(qg);
  require_shape(qg, r);
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const Index hd = r.hdim();
  const auto coeffs = r.u.coefficients();
  const double scale = coefficient_scale(coeffs);
  CheckReport rep;

  double unitary = 0.0;
  for (const auto& b : r.u.blocks()) {
    const CMatrix id = CMatrix::Identity(b.rows(), b.cols());
    unitary = std::max(unitary, max_abs(CMatrix(b.adjoint() * b - id)));
    unitary = std::max(unitary, max_abs(CMatrix(b * b.adjoint() - id)));
  }
  rep.add("unitary", unitary, tol);

  // sum_k Delta_{(x,y),k} U_k = U_x U_y
  std::vector<CMatrix> lhs(static_cast<std::size_t>(d * d), CMatrix::Zero(hd, hd));
  for (const auto& e : qg.delta().entries()) lhs[static_cast<std::size_t>(e.target)] += e.value * coeffs[static_cast<std::size_t>(e.source)];
  double comult = 0.0;
  for (Index x = 0; x < d; ++x)
    for (Index y = 0; y < d; ++y)
      comult = std::max(comult, max_abs(CMatrix(lhs[static_cast<std::size_t>(x * d + y)] -
                                                coeffs[static_cast<std::size_t>(x)] * coeffs[static_cast<std::size_t>(y)])));
  rep.add("comultiplicative", comult, tol * scale * scale);

  // sum_k S_{jk} U_k = U_{t(j)}^dagger
  const CMatrix& sm = qg.antipode_matrix();
  double anti = 0.0;
  for (Index j = 0; j < d; ++j) {
    const CMatrix lhs_j = weighted_sum(coeffs, sm.row(j).transpose(), hd);
    anti = std::max(anti, max_abs(CMatrix(lhs_j - coeffs[static_cast<std::size_t>(s.transpose_index(j))].adjoint())));
  }
  rep.add("antipode_adjoint", anti, tol * scale);
  return rep;
}

AlgebraElement slice_T(const CVector& xi, const CVector& eta, const OperatorTensor& x) {
  if (xi.size() != x.hdim() || eta.size() != x.hdim()) throw Error(Errc::ShapeMismatch, "slice_T: vector length != hdim");
  const BlockShape& s = x.shape();
  CVector c(s.dim());
  for (Index k = 0; k < s.dim(); ++k) c(k) = xi.dot(x.coefficient(k) * eta);
  return AlgebraElement::from_coefficients(s, c);
}

CVector action_weights(const QuantumGroup& qg, const HaarData& haar, const CVector& a) {
  const BlockShape& s = qg.shape();
  const CVector ti = haar.theta_inv.coefficients();
  const CVector b = multiply(s, multiply(s, ti, qg.antipode_matrix() * a), multiply(s, ti, ti));
  return product_form(s, haar.psi) * b;
}

CVector action_weights_inverse_form(const QuantumGroup& qg, const HaarData& haar, const CVector& a) {
  const BlockShape& s = qg.shape();
  const CVector ta = multiply(s, haar.theta.coefficients(), a);
  return qg.antipode_inverse().transpose() * (product_form(s, haar.psi) * ta);
}

CMatrix induced_dual_action(const QuantumGroup& qg, const HaarData& haar, const Representation& r,
                            const CVector& a, double tol) {
  require_verified(qg);
  require_shape(qg, r);
  if (a.size() != qg.dim()) throw Error(Errc::ShapeMismatch, "induced_dual_action: element has wrong length");
  const CVector w = action_weights(qg, haar, a);
  const CVector w2 = action_weights_inverse_form(qg, haar, a);
  const double scale = 1.0 + (w.size() ? w.cwiseAbs().maxCoeff() : 0.0);
  if ((w - w2).cwiseAbs().maxCoeff() > tol * scale)
    throw Error(Errc::FormulaMismatch, "the two forms of the induced action disagree");
  return weighted_sum(r.u.coefficients(), w, r.hdim());
}

CheckReport check_induced_action(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                                 const Representation& r, double tol) {
  const Index d = qg.dim();
  const Index hd = r.hdim();
  std::vector<CMatrix> act;
  for (Index k = 0; k < d; ++k) act.push_back(induced_dual_action(qg, haar, r, qg.shape().unit_vector(k), tol));
  auto apply = [&](const CVector& a) {
    CMatrix out = CMatrix::Zero(hd, hd);
    for (Index k = 0; k < d; ++k)
      if (a(k) != cplx(0.0)) out += a(k) * act[static_cast<std::size_t>(k)];
    return out;
  };
  CheckReport rep;
  const double scale = coefficient_scale(act);
  rep.add("action_unit", max_abs(CMatrix(apply(dual.unit) - CMatrix::Identity(hd, hd))), tol * scale);
  double anti = 0.0, star_res = 0.0;
  for (Index a = 0; a < d; ++a) {
    const CVector ea = qg.shape().unit_vector(a);
    for (Index b = 0; b < d; ++b) {
      const CVector eb = qg.shape().unit_vector(b);
      anti = std::max(anti, max_abs(CMatrix(apply(convolve(dual, ea, eb)) -
                                            act[static_cast<std::size_t>(b)] * act[static_cast<std::size_t>(a)])));
    }
    star_res = std::max(star_res, max_abs(CMatrix(apply(sharp(dual, ea)) - act[static_cast<std::size_t>(a)].adjoint())));
  }
  rep.add("action_anti_multiplicative", anti, tol * scale * scale);
  rep.add("action_star", star_res, tol * scale);
  return rep;
}

IrrepData irrep_matrix_elements(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, int i,
                                double tol) {
  require_verified(qg);
  if (i < 0 || i >= dual.block_count()) throw Error(Errc::NotFound, "no dual block " + std::to_string(i));
  const BlockShape& s = qg.shape();
  const BlockShape ns = dual.dual_shape();
  const Index d = s.dim();
  const int di = dual.dims[static_cast<std::size_t>(i)];

  // pairing(m, x) = psi(e_x theta^-1 S(f_m) theta^-2)
  CMatrix pairing(d, d);
  for (Index m = 0; m < d; ++m) pairing.row(m) = action_weights(qg, haar, dual.units.col(m)).transpose();
  Eigen::FullPivLU<CMatrix> lu(pairing);
  if (!lu.isInvertible()) throw Error(Errc::NoSolution, "psi-pairing with the matrix units is degenerate");

  // R(f^i_{pq})_{kl} = delta_{kq} delta_{lp}
  std::vector<CVector> u(static_cast<std::size_t>(di * di));
  for (int k = 0; k < di; ++k)
    for (int l = 0; l < di; ++l) {
      CVector target = CVector::Zero(d);
      target(ns.index(i, l, k)) = 1.0;
      u[static_cast<std::size_t>(k * di + l)] = lu.solve(target);
    }
  auto at = [&](int k, int l) -> const CVector& { return u[static_cast<std::size_t>(k * di + l)]; };

  std::vector<CMatrix> coeffs(static_cast<std::size_t>(d), CMatrix::Zero(di, di));
  for (Index x = 0; x < d; ++x)
    for (int k = 0; k < di; ++k)
      for (int l = 0; l < di; ++l) coeffs[static_cast<std::size_t>(x)](k, l) = at(k, l)(x);

  IrrepData out{i, di, representation_from_coefficients("irrep" + std::to_string(i), s, coeffs), 0.0, {}};
  out.report = check_representation(qg, out.rep, tol);

  const CVector u00_sq = convolve(dual, at(0, 0), at(0, 0));
  out.convolution_constant = at(0, 0).dot(u00_sq) / at(0, 0).squaredNorm();
  const cplx c = out.convolution_constant;
  double umax = 0.0;
  for (const auto& v : u) umax = std::max(umax, v.cwiseAbs().maxCoeff());
  double conv = 0.0;
  for (int k = 0; k < di; ++k)
    for (int l = 0; l < di; ++l)
      for (int p = 0; p < di; ++p)
        for (int q = 0; q < di; ++q) {
          CVector r = convolve(dual, at(k, l), at(p, q));
          if (l == p) r -= c * at(k, q);
          conv = std::max(conv, r.cwiseAbs().maxCoeff());
        }
  out.report.add("convolution_relation", conv, tol * (1.0 + std::abs(c)) * (1.0 + umax));

  // phi(u_kl^* u_pq) vanishes off the diagonal.
  double diag = 0.0, off = 0.0;
  for (int a = 0; a < di * di; ++a)
    for (int b = 0; b < di * di; ++b) {
      const CVector prod = multiply(s, star(s, u[static_cast<std::size_t>(a)]), u[static_cast<std::size_t>(b)]);
      const double v = std::abs(apply_functional(haar.phi, prod));
      if (a == b)
        diag = std::max(diag, v);
      else
        off = std::max(off, v);
    }
  out.report.add("haar_orthogonality", off, tol * (1.0 + diag));
  return out;
}

Index IsotypicData::offset(int i) const {
  Index o = 0;
  for (int j = 0; j < i; ++j) o += Index(dims[static_cast<std::size_t>(j)]) * multiplicities[static_cast<std::size_t>(j)];
  return o;
}

Representation isotypic_sum(const std::vector<IrrepData>& irreps, const std::vector<int>& multiplicities) {
  if (irreps.size() != multiplicities.size()) throw Error(Errc::ShapeMismatch, "isotypic_sum: one multiplicity per irrep");
  if (irreps.empty()) throw Error(Errc::InvalidInput, "isotypic_sum: no irreducibles");
  const BlockShape& s = irreps.front().rep.shape();
  Index hd = 0;
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    if (multiplicities[i] < 0) throw Error(Errc::InvalidInput, "negative multiplicity");
    hd += Index(irreps[i].dim) * multiplicities[i];
  }
  std::vector<CMatrix> coeffs(static_cast<std::size_t>(s.dim()), CMatrix::Zero(hd, hd));
  Index o = 0;
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    const Index m = multiplicities[i];
    if (m == 0) continue;
    const Index n = Index(irreps[i].dim) * m;
    for (Index k = 0; k < s.dim(); ++k)
      coeffs[static_cast<std::size_t>(k)].block(o, o, n, n) =
          Eigen::kroneckerProduct(irreps[i].rep.u.coefficient(k), CMatrix::Identity(m, m));
    o += n;
  }
  return representation_from_coefficients("isotypic", s, coeffs);
}

IsotypicData isotypic_decomposition(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                                    const Representation& r, double tol) {
  require_verified(qg);
  require_shape(qg, r);
  require_size(r.hdim());
  if (dual.dims.empty()) throw Error(Errc::Unverified, "isotypic_decomposition needs a Wedderburn decomposition");
  const Index hd = r.hdim();
  const BlockShape ns = dual.dual_shape();
  IsotypicData out;
  out.dims = dual.dims;

  auto act = [&](const CVector& a) { return induced_dual_action(qg, haar, r, a, tol); };

  double proj = 0.0;
  CMatrix total = CMatrix::Zero(hd, hd);
  std::vector<CMatrix> columns;
  for (int i = 0; i < dual.block_count(); ++i) {
    const int di = dual.dims[static_cast<std::size_t>(i)];
    const CMatrix z = act(dual.central[static_cast<std::size_t>(i)]);
    proj = std::max(proj, std::max(max_abs(CMatrix(z * z - z)), max_abs(CMatrix(z - z.adjoint()))));
    total += z;

    const CMatrix e11 = act(dual.unit_element(i, 0, 0));
    proj = std::max(proj, std::max(max_abs(CMatrix(e11 * e11 - e11)), max_abs(CMatrix(e11 - e11.adjoint()))));
    const auto eig = herm_eig(CMatrix((e11 + e11.adjoint()) / 2.0), tol);
    CMatrix v(hd, 0);
    for (Index c = 0; c < hd; ++c)
      if (eig.values(c) > 0.5) {
        v.conservativeResize(hd, v.cols() + 1);
        v.col(v.cols() - 1) = eig.vectors.col(c);
      }
    out.multiplicities.push_back(static_cast<int>(v.cols()));
    for (int k = 0; k < di; ++k) columns.push_back(k == 0 ? v : CMatrix(act(dual.unit_element(i, 0, k)) * v));
  }
  out.report.add("central_projections", proj, tol);
  out.report.add("central_resolution", max_abs(CMatrix(total - CMatrix::Identity(hd, hd))), tol);

  Index filled = 0;
  for (std::size_t i = 0; i < out.dims.size(); ++i) filled += Index(out.dims[i]) * out.multiplicities[i];
  if (filled != hd)
    throw Error(Errc::ProjectionDefect, "isotypic pieces have total dimension " + std::to_string(filled) + ", expected " +
                                            std::to_string(hd));

  out.basis.resize(hd, hd);
  Index col = 0;
  for (const auto& c : columns) {
    out.basis.middleCols(col, c.cols()) = c;
    col += c.cols();
  }
  out.report.add("basis_unitary", max_abs(CMatrix(out.basis.adjoint() * out.basis - CMatrix::Identity(hd, hd))), tol);

  for (int i = 0; i < dual.block_count(); ++i) out.irreps.push_back(irrep_matrix_elements(qg, haar, dual, i, tol));
  const Representation expect = isotypic_sum(out.irreps, out.multiplicities);
  double re = 0.0;
  for (Index k = 0; k < qg.dim(); ++k)
    re = std::max(re, max_abs(CMatrix(out.basis.adjoint() * r.u.coefficient(k) * out.basis - expect.u.coefficient(k))));
  out.report.add("reassembly", re, tol);
  return out;
}

CMatrix l2_gram(const QuantumGroup& qg, const HaarData& haar) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const CMatrix bphi = product_form(s, haar.phi);
  CMatrix gram(d, d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) gram(k, l) = bphi(s.transpose_index(k), l);
  return gram;
}

Representation regular_representation(const QuantumGroup& qg, const HaarData& haar, double tol) {
  require_verified(qg);
  const Index d = qg.dim();
  const CMatrix gram = l2_gram(qg, haar);
  const CMatrix gs = positive_sqrt(gram, tol);
  const CMatrix gi = inverse_sqrt(gram, tol);

  std::vector<CMatrix> m(static_cast<std::size_t>(d), CMatrix::Zero(d, d));
  for (const auto& e : qg.delta().entries()) {
    const Index x = e.target / d;
    const Index k = e.target % d;
    m[static_cast<std::size_t>(k)](x, e.source) += e.value;
  }
  for (auto& c : m) c = gs * c * gi;
  return representation_from_coefficients("regular", qg.shape(), m);
}

Representation group_regular_representation(const Group& g) {
  const Index n = g.order;
  std::vector<CMatrix> coeffs(static_cast<std::size_t>(n), CMatrix::Zero(n, n));
  for (int a = 0; a < g.order; ++a)
    for (int h = 0; h < g.order; ++h) coeffs[static_cast<std::size_t>(a)](g.mul(a, h), h) = 1.0;
  std::vector<int> ones(static_cast<std::size_t>(n), 1);
  return representation_from_coefficients("left_regular", BlockShape(ones), coeffs);
}

}  // namespace dqg
