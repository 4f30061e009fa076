#include "dqg/hopf.hpp"

#include <limits>

#include "dqg/kernel.hpp"

namespace dqg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Permutation matrix of a -> a^* on coefficient vectors (before conjugation).
CMatrix transpose_permutation(const BlockShape& shape) {
  const Index d = shape.dim();
  CMatrix p = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) p(shape.transpose_index(k), k) = 1.0;
  return p;
}

}  // namespace

QuantumGroup::QuantumGroup(std::string name, BlockShape shape, StructureMap delta)
    : name_(std::move(name)), shape_(std::move(shape)), delta_(std::move(delta)) {
  if (!(delta_.source() == Space::algebra(shape_)) || !(delta_.target() == Space::tensor(shape_, shape_)))
    throw Error(Errc::SpaceMismatch, "comultiplication must map A to A (x) A");
}

void QuantumGroup::set_epsilon(StructureMap e) {
  if (!(e.source() == Space::algebra(shape_)) || !(e.target() == Space::scalars()))
    throw Error(Errc::SpaceMismatch, "counit must map A to the scalars");
  epsilon_ = std::move(e);
  verified_ = false;
}

void QuantumGroup::set_antipode(StructureMap s) {
  if (!(s.source() == Space::algebra(shape_)) || !(s.target() == Space::algebra(shape_)))
    throw Error(Errc::SpaceMismatch, "antipode must map A to A");
  antipode_ = std::move(s);
  antipode_dense_ = map_as_matrix(*antipode_);
  antipode_inv_.resize(0, 0);
  verified_ = false;
}

CVector QuantumGroup::epsilon_vector() const {
  if (!epsilon_) throw Error(Errc::Unverified, "counit has not been solved");
  return map_as_matrix(*epsilon_).row(0).transpose();
}

const CMatrix& QuantumGroup::antipode_matrix() const {
  if (!antipode_) throw Error(Errc::Unverified, "antipode has not been solved");
  return antipode_dense_;
}

const CMatrix& QuantumGroup::antipode_inverse() const {
  if (antipode_inv_.size() == 0) throw Error(Errc::Unverified, "antipode inverse unavailable before verification");
  return antipode_inv_;
}

void require_verified(const QuantumGroup& qg) {
  if (!qg.verified()) throw Error(Errc::Unverified, "quantum group '" + qg.name() + "' has not passed check_axioms");
}

Index basis_product(const BlockShape& shape, Index k, Index l) {
  const auto a = shape.locate(k);
  const auto b = shape.locate(l);
  if (a.block != b.block || a.col != b.row) return -1;
  return shape.index(a.block, a.row, b.col);
}

CVector delta_of(const QuantumGroup& qg, Index k) { return qg.delta().matrix().col(k); }

StructureMap functional_map(const BlockShape& shape, const CVector& values) {
  if (values.size() != shape.dim()) throw Error(Errc::ShapeMismatch, "functional length != dim");
  return StructureMap::from_dense(Space::algebra(shape), Space::scalars(), values.transpose());
}

// --- axioms -------------------------------------------------------------------

CheckReport check_homomorphism(const QuantumGroup& qg, double tol) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const CMatrix delta = map_as_matrix(qg.delta());

  double mult = 0.0;
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      const Index p = basis_product(s, k, l);
      CVector lhs = p >= 0 ? CVector(delta.col(p)) : CVector::Zero(d * d);
      const CVector rhs = tensor_multiply(s, s, delta.col(k), delta.col(l));
      mult = std::max(mult, max_abs(CVector(lhs - rhs)));
    }

  double star_res = 0.0;
  for (Index k = 0; k < d; ++k) {
    const CVector lhs = delta.col(s.transpose_index(k));
    const CVector rhs = tensor_star(s, s, delta.col(k));
    star_res = std::max(star_res, max_abs(CVector(lhs - rhs)));
  }

  const CVector one = s.identity();
  const CVector unit = delta * one;
  const CVector expected = TensorElement::identity(s, s).coefficients();

  CheckReport r;
  r.add("delta_multiplicative", mult, tol);
  r.add("delta_star", star_res, tol);
  r.add("delta_unital", max_abs(CVector(unit - expected)), tol);
  return r;
}

CheckReport check_coassociativity(const QuantumGroup& qg, double tol) {
  const Space a = Space::algebra(qg.shape());
  const StructureMap id = StructureMap::identity(a);
  const StructureMap left = compose(tensor(qg.delta(), id), qg.delta());
  const StructureMap right = compose(tensor(id, qg.delta()), qg.delta());
  CheckReport r;
  r.add("coassociativity", max_abs_diff(left, right), tol);
  return r;
}

CMatrix t1_matrix(const QuantumGroup& qg) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const CMatrix delta = map_as_matrix(qg.delta());
  const CVector one = s.identity();
  CMatrix t(d * d, d * d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      CVector rhs = CVector::Zero(d * d);
      for (Index j = 0; j < d; ++j) rhs(j * d + l) = one(j);
      t.col(k * d + l) = tensor_multiply(s, s, delta.col(k), rhs);
    }
  return t;
}

CMatrix t2_matrix(const QuantumGroup& qg) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const CMatrix delta = map_as_matrix(qg.delta());
  const CVector one = s.identity();
  CMatrix t(d * d, d * d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      CVector lhs = CVector::Zero(d * d);
      for (Index j = 0; j < d; ++j) lhs(k * d + j) = one(j);
      t.col(k * d + l) = tensor_multiply(s, s, lhs, delta.col(l));
    }
  return t;
}

T1T2Report check_T1_T2(const QuantumGroup& qg, double tol) {
  T1T2Report out;
  const Index n = qg.dim() * qg.dim();
  const CMatrix t1 = t1_matrix(qg);
  const CMatrix t2 = t2_matrix(qg);
  out.rank_t1 = numerical_rank(t1, tol);
  out.rank_t2 = numerical_rank(t2, tol);
  out.cond_t1 = condition_number(t1);
  out.cond_t2 = condition_number(t2);
  out.report.add("T1_bijective", static_cast<double>(n - out.rank_t1), 0.0);
  out.report.add("T2_bijective", static_cast<double>(n - out.rank_t2), 0.0);
  return out;
}

// --- counit -------------------------------------------------------------------

StructureMap solve_counit(const QuantumGroup& qg, double tol) {
  const Index d = qg.dim();
  const auto entries = qg.delta().entries();
  CMatrix a = CMatrix::Zero(2 * d * d, d);
  CVector b = CVector::Zero(2 * d * d);
  for (const auto& e : entries) {
    const Index k1 = e.target / d;
    const Index k2 = e.target % d;
    const Index k = e.source;
    a(k * d + k2, k1) += e.value;          // (eps (x) id)Delta(e_k) = e_k
    a(d * d + k * d + k1, k2) += e.value;  // (id (x) eps)Delta(e_k) = e_k
  }
  for (Index k = 0; k < d; ++k) {
    b(k * d + k) = 1.0;
    b(d * d + k * d + k) = 1.0;
  }
  const CVector eps = solve_unique(a, b, tol, "counit equations");
  return functional_map(qg.shape(), eps);
}

double counit_character_residual(const BlockShape& s, const CVector& eps) {
  const Index d = s.dim();
  double r = 0.0;
  for (Index k = 0; k < d; ++k) {
    for (Index l = 0; l < d; ++l) {
      const Index p = basis_product(s, k, l);
      const cplx lhs = p >= 0 ? eps(p) : cplx(0.0);
      r = std::max(r, std::abs(lhs - eps(k) * eps(l)));
    }
    r = std::max(r, std::abs(eps(s.transpose_index(k)) - std::conj(eps(k))));
  }
  return r;
}

// --- antipode -----------------------------------------------------------------

StructureMap solve_antipode(const QuantumGroup& qg, const CVector& eps, double tol) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const auto entries = qg.delta().entries();
  // Unknown S_{m j} (coefficient of e_m in S(e_j)) sits at j * d + m.
  CMatrix a = CMatrix::Zero(2 * d * d, d * d);
  CVector b = CVector::Zero(2 * d * d);
  for (const auto& e : entries) {
    const Index j = e.target / d;
    const Index l = e.target % d;
    const Index k = e.source;
    for (Index m = 0; m < d; ++m) {
      const Index r1 = basis_product(s, m, l);  // S(e_j) e_l
      if (r1 >= 0) a(k * d + r1, j * d + m) += e.value;
      const Index r2 = basis_product(s, j, m);  // e_j S(e_l)
      if (r2 >= 0) a(d * d + k * d + r2, l * d + m) += e.value;
    }
  }
  const CVector one = s.identity();
  for (Index k = 0; k < d; ++k) {
    b.segment(k * d, d) = eps(k) * one;
    b.segment(d * d + k * d, d) = eps(k) * one;
  }
  const CVector x = solve_unique(a, b, tol, "antipode equations");
  CMatrix sm(d, d);
  for (Index j = 0; j < d; ++j) sm.col(j) = x.segment(j * d, d);
  return StructureMap::from_dense(Space::algebra(s), Space::algebra(s), sm);
}

AntipodeResiduals antipode_residuals(const QuantumGroup& qg, const CMatrix& sm, const CVector& eps) {
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const CMatrix delta = map_as_matrix(qg.delta());
  const CVector one = s.identity();
  AntipodeResiduals r;

  for (Index k = 0; k < d; ++k) {
    CVector left = CVector::Zero(d);
    CVector right = CVector::Zero(d);
    for (Index j = 0; j < d; ++j)
      for (Index l = 0; l < d; ++l) {
        const cplx c = delta(j * d + l, k);
        if (c == cplx(0.0)) continue;
        left += c * multiply(s, sm.col(j), s.unit_vector(l));
        right += c * multiply(s, s.unit_vector(j), sm.col(l));
      }
    r.relation = std::max({r.relation, max_abs(CVector(left - eps(k) * one)), max_abs(CVector(right - eps(k) * one))});
  }

  const CMatrix p = transpose_permutation(s);
  r.involution = max_abs(CMatrix(p * sm.conjugate() * p * sm - CMatrix::Identity(d, d)));

  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      const Index q = basis_product(s, k, l);
      const CVector lhs = q >= 0 ? CVector(sm.col(q)) : CVector::Zero(d);
      const CVector rhs = multiply(s, sm.col(l), sm.col(k));
      r.anti_hom = std::max(r.anti_hom, max_abs(CVector(lhs - rhs)));
    }

  const CMatrix flip = map_as_matrix(flip_map(s, s));
  CMatrix ss(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) ss.block(i * d, j * d, d, d) = sm(i, j) * sm;
  r.coproduct = max_abs(CMatrix(ss * delta - flip * delta * sm));

  const CVector eps_s = sm.transpose() * eps;
  r.counit = std::max(max_abs(CVector(eps_s - eps)), max_abs(CVector(sm * one - one)));
  return r;
}

std::vector<int> antipode_block_bijection(const BlockShape& s, const CMatrix& sm, double tol) {
  std::vector<int> perm(static_cast<std::size_t>(s.block_count()), -1);
  for (int a = 0; a < s.block_count(); ++a) {
    const CVector img = sm * s.block_identity(a);
    for (int b = 0; b < s.block_count(); ++b)
      if (max_abs(CVector(img - s.block_identity(b))) <= tol) {
        perm[static_cast<std::size_t>(a)] = b;
        break;
      }
    if (perm[static_cast<std::size_t>(a)] < 0)
      throw Error(Errc::NotBlockPermutation, "S(e_" + std::to_string(a) + ") is not a block identity");
  }
  for (int a = 0; a < s.block_count(); ++a)
    if (perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])] != a)
      throw Error(Errc::NotBlockPermutation, "block bijection is not an involution");
  return perm;
}

AxiomReport check_axioms(QuantumGroup& qg, const Config& cfg) {
  const double tol = cfg.tol;
  AxiomReport out;
  qg.verified_ = false;

  out.report.append(check_homomorphism(qg, tol));
  out.report.append(check_coassociativity(qg, tol));
  out.t1t2 = check_T1_T2(qg, tol);
  out.report.append(out.t1t2.report);

  const auto supplied_eps = qg.epsilon_;
  const auto supplied_s = qg.antipode_;

  CVector eps;
  try {
    const StructureMap e = solve_counit(qg, tol);
    eps = map_as_matrix(e).row(0).transpose();
    out.report.add("counit_solve", 0.0, tol);
    out.report.add("counit_character", counit_character_residual(qg.shape(), eps), tol);
    if (supplied_eps)
      out.report.add("counit_matches_input", max_abs(CMatrix(map_as_matrix(*supplied_eps) - map_as_matrix(e))), tol);
    qg.epsilon_ = e;
  } catch (const Error& e) {
    out.detail = e.what();
    out.report.add("counit_solve", kInf, tol);
    out.report.add("antipode_solve", kInf, tol);
    return out;
  }

  try {
    const StructureMap s = solve_antipode(qg, eps, tol);
    const CMatrix sm = map_as_matrix(s);
    out.report.add("antipode_solve", 0.0, tol);
    const AntipodeResiduals r = antipode_residuals(qg, sm, eps);
    out.report.add("antipode_relations", r.relation, tol);
    out.report.add("antipode_star_involution", r.involution, tol);
    out.report.add("antipode_anti_homomorphism", r.anti_hom, tol);
    out.report.add("antipode_coproduct", r.coproduct, tol);
    out.report.add("antipode_counit", r.counit, tol);
    if (supplied_s)
      out.report.add("antipode_matches_input", max_abs(CMatrix(map_as_matrix(*supplied_s) - sm)), tol);
    qg.antipode_ = s;
    qg.antipode_dense_ = sm;
    try {
      out.bijection = antipode_block_bijection(qg.shape(), sm, tol);
      out.report.add_flag("antipode_block_bijection", true);
    } catch (const Error&) {
      out.report.add_flag("antipode_block_bijection", false);
    }
  } catch (const Error& e) {
    out.detail = e.what();
    out.report.add("antipode_solve", kInf, tol);
    return out;
  }

  if (out.report.pass()) {
    Eigen::FullPivLU<CMatrix> lu(qg.antipode_dense_);
    qg.antipode_inv_ = lu.inverse();
    qg.bijection_ = out.bijection;
    qg.verified_ = true;
  }
  return out;
}

}  // namespace dqg
