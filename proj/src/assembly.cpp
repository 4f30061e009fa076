#include "dqg/assembly.hpp"

#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "dqg/kernel.hpp"

namespace dqg {

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

CMatrix coaction_matrix(const ActionDatum& ad) { return map_as_matrix(ad.coaction); }

// (id (x) phi) on C (x) A, coefficient vectors.
CVector slice_phi(const ActionDatum& ad, const HaarData& haar, const CVector& x) {
  const Index dc = ad.shape.dim();
  const Index d = haar.phi.size();
  CVector out = CVector::Zero(dc);
  for (Index c = 0; c < dc; ++c) out(c) = (haar.phi.transpose() * x.segment(c * d, d))(0);
  return out;
}

// Eigenvectors of a grading with eigenvalue sign s, as columns.
CMatrix grading_space(const CMatrix& gamma, int s, double tol) {
  const auto eig = herm_eig(CMatrix((gamma + gamma.adjoint()) / 2.0), tol);
  const Index n = gamma.rows();
  CMatrix out(n, 0);
  for (Index c = 0; c < n; ++c)
    if ((s > 0 && eig.values(c) > 0.0) || (s < 0 && eig.values(c) < 0.0)) {
      out.conservativeResize(n, out.cols() + 1);
      out.col(out.cols() - 1) = eig.vectors.col(c);
    }
  return out;
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix grading_diag(int p, int q) {
  CVector g(p + q);
  for (int k = 0; k < p + q; ++k) g(k) = k < p ? 1.0 : -1.0;
  return g.asDiagonal();
}

// Graded module rank over dual block i: rank [L_{G_ab * z_i}] / d_i for the
// Gram matrix of the given vectors.
long module_rank(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, const Representation& u,
                 const CMatrix& vecs, int i, double tol) {
  const Index n = vecs.cols();
  if (n == 0) return 0;
  const Index d = dual.dim();
  const int di = dual.dims[static_cast<std::size_t>(i)];
  const BlockShape ns = dual.dual_shape();
  const CMatrix units_i = dual.units.middleCols(ns.offset(i), Index(di) * di);
  const CVector& z = dual.central[static_cast<std::size_t>(i)];
  CMatrix m(n * d, n * units_i.cols());
  double gmax = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const CVector g = module_inner_product(qg, haar, u, vecs.col(a), vecs.col(b));
      gmax = std::max(gmax, max_abs(g));
      m.block(a * d, b * units_i.cols(), d, units_i.cols()) = left_convolution(dual, convolve(dual, g, z)) * units_i;
    }
  // The slice may vanish identically; measure rank against the size of the
  // whole Gram matrix, not the slice.
  const double floor = (1.0 + gmax) * (1.0 + max_abs(dual.table)) * (1.0 + max_abs(units_i));
  const Index r = numerical_rank(m, tol, floor);
  if (r % di != 0)
    throw Error(Errc::RouteDisagreement, "module rank " + std::to_string(r) + " over block " + std::to_string(i) +
                                             " is not a multiple of " + std::to_string(di));
  return static_cast<long>(r / di);
}

}  // namespace

ActionDatum trivial_action(const QuantumGroup& qg, const HaarData& haar) {
  const BlockShape& s = qg.shape();
  const BlockShape c({1});
  std::vector<StructureMap::Entry> entries;
  for (Index k = 0; k < s.dim(); ++k)
    if (s.is_diagonal(k)) entries.push_back({k, 0, 1.0});
  const double mass = apply_functional(haar.phi, s.identity()).real();
  CVector h(1);
  h(0) = 1.0 / std::sqrt(mass);
  return {"trivial", c, StructureMap::from_entries(Space::algebra(c), Space::tensor(c, s), entries), h};
}

ActionDatum self_action(const QuantumGroup& qg, const HaarData& haar) {
  const CVector h0 = haar.h0.coefficients();
  const double mass = apply_functional(haar.phi, h0).real();
  return {"self", qg.shape(), qg.delta(), h0 / std::sqrt(mass)};
}

CheckReport verify_action_assumptions(const QuantumGroup& qg, const HaarData& haar, const ActionDatum& ad, double tol) {
  require_verified(qg);
  const BlockShape& c = ad.shape;
  const BlockShape& s = qg.shape();
  if (!(ad.coaction.source() == Space::algebra(c)) || !(ad.coaction.target() == Space::tensor(c, s)))
    throw Error(Errc::SpaceMismatch, "coaction must map C to C (x) A");
  if (ad.h.size() != c.dim()) throw Error(Errc::ShapeMismatch, "h has the wrong length");
  const CMatrix dc = coaction_matrix(ad);
  CheckReport rep;

  double hom = 0.0, st = 0.0;
  for (Index x = 0; x < c.dim(); ++x) {
    const CVector ex = c.unit_vector(x);
    for (Index y = 0; y < c.dim(); ++y) {
      const CVector ey = c.unit_vector(y);
      hom = std::max(hom, max_abs(CVector(dc * multiply(c, ex, ey) - tensor_multiply(c, s, dc.col(x), dc.col(y)))));
    }
    st = std::max(st, max_abs(CVector(dc * star(c, ex) - tensor_star(c, s, dc.col(x)))));
  }
  rep.add("coaction_multiplicative", hom, tol);
  rep.add("coaction_star", st, tol);
  const CVector one = kroneckerProduct(c.identity(), s.identity());
  rep.add("coaction_unital", max_abs(CVector(dc * c.identity() - one)), tol);

  const StructureMap lhs = compose(tensor(ad.coaction, StructureMap::identity(Space::algebra(s))), ad.coaction);
  const StructureMap rhs = compose(tensor(StructureMap::identity(Space::algebra(c)), qg.delta()), ad.coaction);
  rep.add("coaction_coassociative", max_abs_diff(lhs, rhs), tol);

  const AlgebraElement h = AlgebraElement::from_coefficients(c, ad.h);
  double herm = 0.0, min_eig = std::numeric_limits<double>::infinity();
  for (int a = 0; a < c.block_count(); ++a) {
    herm = std::max(herm, hermitian_defect(h.block(a)));
    const CMatrix hb = (h.block(a) + h.block(a).adjoint()) / 2.0;
    min_eig = std::min(min_eig, herm_eig(hb, 1.0).values(0));
  }
  rep.add("h_self_adjoint", herm, tol);
  rep.add("h_positive", std::max(0.0, -min_eig), tol);
  const CVector h2 = multiply(c, ad.h, ad.h);
  rep.add("h_normalised", max_abs(CVector(slice_phi(ad, haar, dc * h2) - c.identity())), tol);
  // Density and algebraicity of the coaction hold for every finite-dimensional C.
  rep.add_flag("dense_subalgebra", true);
  rep.add_flag("algebraic_coaction", true);
  return rep;
}

CMatrix pi_of(const Cycle& cycle, const CVector& c) {
  if (c.size() != static_cast<Index>(cycle.pi.size())) throw Error(Errc::ShapeMismatch, "pi_of: wrong coefficient count");
  CMatrix out = CMatrix::Zero(cycle.hdim(), cycle.hdim());
  for (Index x = 0; x < c.size(); ++x)
    if (c(x) != cplx(0.0)) out += c(x) * cycle.pi[static_cast<std::size_t>(x)];
  return out;
}

CheckReport check_cycle(const QuantumGroup& qg, const ActionDatum& ad, const Cycle& cycle, double tol, bool graded) {
  const BlockShape& c = ad.shape;
  const Index hd = cycle.hdim();
  if (static_cast<Index>(cycle.pi.size()) != c.dim()) throw Error(Errc::ShapeMismatch, "pi needs one matrix per basis element of C");
  for (const auto& p : cycle.pi)
    if (p.rows() != hd || p.cols() != hd) throw Error(Errc::ShapeMismatch, "pi matrix is not hdim x hdim");
  if (cycle.f.rows() != hd || cycle.f.cols() != hd || cycle.gamma.rows() != hd || cycle.gamma.cols() != hd)
    throw Error(Errc::ShapeMismatch, "F and gamma must be hdim x hdim");

  CheckReport rep;
  rep.append(check_representation(qg, cycle.u, tol), "U.");
  const CMatrix id = CMatrix::Identity(hd, hd);

  double hom = 0.0, st = 0.0;
  for (Index x = 0; x < c.dim(); ++x) {
    const CVector ex = c.unit_vector(x);
    for (Index y = 0; y < c.dim(); ++y)
      hom = std::max(hom, max_abs(CMatrix(cycle.pi[static_cast<std::size_t>(x)] * cycle.pi[static_cast<std::size_t>(y)] -
                                          pi_of(cycle, multiply(c, ex, c.unit_vector(y))))));
    st = std::max(st, max_abs(CMatrix(pi_of(cycle, star(c, ex)) - cycle.pi[static_cast<std::size_t>(x)].adjoint())));
  }
  rep.add("pi_multiplicative", hom, tol);
  rep.add("pi_star", st, tol);
  rep.add("pi_unital", max_abs(CMatrix(pi_of(cycle, c.identity()) - id)), tol);

  // (pi (x) id)Delta_C(c_m) = U(pi(c_m) (x) 1)U^*
  const CMatrix dc = coaction_matrix(ad);
  const Index d = qg.dim();
  double cov = 0.0;
  for (Index m = 0; m < c.dim(); ++m) {
    const OperatorTensor rhs = cycle.u.u * OperatorTensor::ampliate(cycle.pi[static_cast<std::size_t>(m)], qg.shape()) *
                               cycle.u.u.adjoint();
    for (Index k = 0; k < d; ++k) {
      CMatrix lhs = CMatrix::Zero(hd, hd);
      for (Index x = 0; x < c.dim(); ++x) {
        const cplx w = dc(x * d + k, m);
        if (w != cplx(0.0)) lhs += w * cycle.pi[static_cast<std::size_t>(x)];
      }
      cov = std::max(cov, max_abs(CMatrix(lhs - rhs.coefficient(k))));
    }
  }
  rep.add("covariance", cov, tol);
  rep.add("f_hermitian", hermitian_defect(cycle.f), tol * (1.0 + max_abs(cycle.f)));

  if (graded) {
    const CMatrix& g = cycle.gamma;
    rep.add("gamma_hermitian", hermitian_defect(g), tol);
    rep.add("gamma_involution", max_abs(CMatrix(g * g - id)), tol);
    double comm = 0.0;
    for (const auto& p : cycle.pi) comm = std::max(comm, max_abs(CMatrix(g * p - p * g)));
    for (Index k = 0; k < d; ++k) {
      const CMatrix uk = cycle.u.u.coefficient(k);
      comm = std::max(comm, max_abs(CMatrix(g * uk - uk * g)));
    }
    rep.add("gamma_commutes", comm, tol);
    rep.add("f_odd", max_abs(CMatrix(g * cycle.f + cycle.f * g)), tol * (1.0 + max_abs(cycle.f)));
  }
  return rep;
}

// The slice is accumulated in long double and divided by the averaged identity N, which is 1 by A3.
// Rounding to double happens once, so an F that is already invariant comes back bit for bit.
CMatrix average_operator(const HaarData& haar, const ActionDatum& ad, const Cycle& cycle) {
  using lcplx = std::complex<long double>;
  using LMatrix = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
  const BlockShape& shape = cycle.u.shape();
  if (static_cast<int>(haar.rho.size()) != shape.block_count())
    throw Error(Errc::ShapeMismatch, "average_operator: cycle and Haar weight live on different algebras");
  const Index hd = cycle.hdim();
  const LMatrix ph = pi_of(cycle, ad.h).cast<lcplx>();
  const LMatrix x = ph * cycle.f.cast<lcplx>() * ph;
  const LMatrix one = ph * ph;
  LMatrix r = LMatrix::Zero(hd, hd), n = LMatrix::Zero(hd, hd);
  for (int a = 0; a < shape.block_count(); ++a) {
    const int m = shape.block_dim(a);
    const LMatrix u = cycle.u.u.block(a).cast<lcplx>();
    const LMatrix rho = haar.rho[static_cast<std::size_t>(a)].cast<lcplx>();
    const LMatrix id = LMatrix::Identity(m, m);
    const LMatrix yx = u * LMatrix(Eigen::kroneckerProduct(x, id)) * u.adjoint();
    const LMatrix yn = u * LMatrix(Eigen::kroneckerProduct(one, id)) * u.adjoint();
    for (Index h = 0; h < hd; ++h)
      for (Index g = 0; g < hd; ++g) {
        r(h, g) += (yx.block(h * m, g * m, m, m) * rho).trace();
        n(h, g) += (yn.block(h * m, g * m, m, m) * rho).trace();
      }
  }
  const LMatrix ninv = n.partialPivLu().inverse();
  const LMatrix out = (ninv * r + r * ninv) / static_cast<long double>(2);
  return out.unaryExpr([](const lcplx& z) { return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())); });
}

CheckReport check_equivariance(const Representation& u, const CMatrix& t, double tol) {
  if (t.rows() != u.hdim() || t.cols() != u.hdim()) throw Error(Errc::ShapeMismatch, "check_equivariance: wrong size");
  const OperatorTensor tt = OperatorTensor::ampliate(t, u.shape());
  CheckReport rep;
  rep.add("equivariant", block_norm(u.u * tt * u.u.adjoint() - tt), tol * (1.0 + operator_norm(t)));
  return rep;
}

CVector module_inner_product(const QuantumGroup& qg, const HaarData& haar, const Representation& u,
                             const CVector& xi, const CVector& eta) {
  const CVector t = slice_T(xi, eta, u.u).coefficients();
  return multiply(qg.shape(), haar.theta_inv.coefficients(), t);
}

VectorTensor sigma_map(const QuantumGroup& qg, const HaarData& haar, const ActionDatum& ad, const Cycle& cycle,
                       const CVector& xi) {
  if (xi.size() != cycle.hdim()) throw Error(Errc::ShapeMismatch, "sigma_map: vector length != hdim");
  const Index d = qg.dim();
  const CMatrix ph = pi_of(cycle, ad.h);
  CMatrix y(cycle.hdim(), d);
  for (Index k = 0; k < d; ++k) y.col(k) = ph * (cycle.u.u.coefficient(k) * xi);
  const CMatrix lt = left_multiplication(qg.shape(), haar.theta_inv.coefficients());
  return y * lt.transpose();
}

VectorTensor tensor_module_action(const DualAlgebra& dual, const VectorTensor& x, const CVector& a) {
  return x * right_convolution(dual, a).transpose();
}

CVector tensor_module_inner_product(const DualAlgebra& dual, const VectorTensor& x, const VectorTensor& y) {
  const Index d = dual.dim();
  const CMatrix g = x.adjoint() * y;
  CVector out = CVector::Zero(d);
  for (Index k = 0; k < d; ++k) {
    const CVector sk = sharp(dual, dual.carrier.unit_vector(k));
    for (Index l = 0; l < d; ++l)
      if (g(k, l) != cplx(0.0)) out += g(k, l) * convolve(dual, sk, dual.carrier.unit_vector(l));
  }
  return out;
}

CheckReport verify_sigma(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, const ActionDatum& ad,
                         const Cycle& cycle, double tol) {
  const Index hd = cycle.hdim();
  const Index d = qg.dim();
  std::vector<CMatrix> act;
  for (Index k = 0; k < d; ++k) act.push_back(induced_dual_action(qg, haar, cycle.u, qg.shape().unit_vector(k), tol));
  std::vector<VectorTensor> sig;
  std::vector<CVector> basis;
  for (Index i = 0; i < hd; ++i) {
    basis.push_back(CVector::Unit(hd, i));
    sig.push_back(sigma_map(qg, haar, ad, cycle, basis.back()));
  }
  std::vector<std::vector<CVector>> ip(static_cast<std::size_t>(hd));
  double scale = 1.0;
  for (Index i = 0; i < hd; ++i)
    for (Index j = 0; j < hd; ++j) {
      ip[static_cast<std::size_t>(i)].push_back(module_inner_product(qg, haar, cycle.u, basis[static_cast<std::size_t>(i)],
                                                                     basis[static_cast<std::size_t>(j)]));
      scale = std::max(scale, 1.0 + max_abs(ip[static_cast<std::size_t>(i)].back()));
    }
  auto at = [&](Index i, Index j) -> const CVector& { return ip[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };

  double mod = 0.0, iso = 0.0, herm = 0.0, lin = 0.0;
  for (Index i = 0; i < hd; ++i) {
    for (Index a = 0; a < d; ++a) {
      const CVector ea = qg.shape().unit_vector(a);
      const VectorTensor lhs = sigma_map(qg, haar, ad, cycle, act[static_cast<std::size_t>(a)] * basis[static_cast<std::size_t>(i)]);
      mod = std::max(mod, max_abs(CMatrix(lhs - tensor_module_action(dual, sig[static_cast<std::size_t>(i)], ea))));
    }
    for (Index j = 0; j < hd; ++j) {
      iso = std::max(iso, max_abs(CVector(tensor_module_inner_product(dual, sig[static_cast<std::size_t>(i)],
                                                                      sig[static_cast<std::size_t>(j)]) - at(i, j))));
      herm = std::max(herm, max_abs(CVector(sharp(dual, at(i, j)) - at(j, i))));
      for (Index a = 0; a < d; ++a) {
        const CVector ea = qg.shape().unit_vector(a);
        const CVector lhs = module_inner_product(qg, haar, cycle.u, basis[static_cast<std::size_t>(i)],
                                                 act[static_cast<std::size_t>(a)] * basis[static_cast<std::size_t>(j)]);
        lin = std::max(lin, max_abs(CVector(lhs - convolve(dual, at(i, j), ea))));
      }
    }
  }
  CheckReport rep;
  rep.add("sigma_module_map", mod, tol * scale);
  rep.add("sigma_isometry", iso, tol * scale);
  rep.add("inner_product_hermitian", herm, tol * scale);
  rep.add("inner_product_module_linear", lin, tol * scale);

  std::mt19937_64 rng(kDefaultSeed);
  double neg = 0.0;
  for (int t = 0; t < 4; ++t) {
    const CVector xi = random_cvector(hd, rng);
    const CMatrix g = gns_operator(dual, module_inner_product(qg, haar, cycle.u, xi, xi));
    neg = std::max(neg, -herm_eig(CMatrix((g + g.adjoint()) / 2.0), 1.0).values(0));
  }
  rep.add("inner_product_positive", std::max(0.0, neg), tol * scale * static_cast<double>(hd));

  CMatrix stacked(hd * d, hd);
  for (Index i = 0; i < hd; ++i) stacked.col(i) = sig[static_cast<std::size_t>(i)].reshaped();
  rep.add_flag("sigma_injective", numerical_rank(stacked, tol) == hd);
  return rep;
}

CheckReport verify_regular_module(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, double tol) {
  const Cycle cyc = regular_cycle(qg, haar, tol);
  const ActionDatum ad = self_action(qg, haar);
  const Index d = qg.dim();
  const CMatrix gs = positive_sqrt(l2_gram(qg, haar), tol);
  double ip = 0.0, act = 0.0, scale = 1.0;
  for (Index a = 0; a < d; ++a) {
    const CVector ea = qg.shape().unit_vector(a);
    const CMatrix ra = induced_dual_action(qg, haar, cyc.u, ea, tol);
    for (Index b = 0; b < d; ++b) {
      const CVector eb = qg.shape().unit_vector(b);
      const CVector expect = convolve(dual, sharp(dual, ea), eb);
      scale = std::max(scale, 1.0 + max_abs(expect));
      ip = std::max(ip, max_abs(CVector(module_inner_product(qg, haar, cyc.u, gs * ea, gs * eb) - expect)));
      act = std::max(act, max_abs(CVector(ra * (gs * eb) - gs * convolve(dual, eb, ea))));
    }
  }
  CheckReport rep;
  rep.append(check_cycle(qg, ad, cyc, tol), "cycle.");
  rep.add("inner_product_is_sharp_convolution", ip, tol * scale);
  rep.add("action_is_convolution", act, tol * scale);
  rep.append(verify_sigma(qg, haar, dual, ad, cyc, tol), "sigma.");
  return rep;
}

long index_even_cycle(Index plus_dim, Index minus_dim, const CMatrix& f) {
  if (plus_dim < 0 || minus_dim < 0 || f.rows() != plus_dim + minus_dim || f.cols() != plus_dim + minus_dim)
    throw Error(Errc::ShapeMismatch, "index_even_cycle: F must act on H+ (+) H-");
  const Index r = (plus_dim == 0 || minus_dim == 0) ? 0 : numerical_rank(f.bottomLeftCorner(minus_dim, plus_dim), kDefaultTol, 1.0);
  const Index ker = plus_dim - r;
  const Index coker = minus_dim - r;
  return static_cast<long>(ker - coker);
}

K0Class K0Class::operator+(const K0Class& other) const {
  if (v.size() != other.v.size()) throw Error(Errc::ShapeMismatch, "K0 classes of different groups");
  K0Class out = *this;
  for (std::size_t i = 0; i < v.size(); ++i) out.v[i] += other.v[i];
  return out;
}

std::string K0Class::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

std::string K0Group::to_string() const {
  return dims.empty() ? std::string("0") : (dims.size() == 1 ? std::string("Z") : "Z^" + std::to_string(dims.size()));
}

K0Group k0_of_algebra(const std::vector<int>& dims) {
  for (int d : dims)
    if (d <= 0) throw Error(Errc::InvalidInput, "block dimensions must be positive");
  return K0Group{dims};
}

K0Class class_of_projection(const AlgebraElement& p, double tol) {
  K0Class out;
  for (int a = 0; a < p.shape().block_count(); ++a) {
    const CMatrix& b = p.block(a);
    const double scale = 1.0 + max_abs(b);
    if (hermitian_defect(b) > tol * scale || max_abs(CMatrix(b * b - b)) > tol * scale)
      throw Error(Errc::NotProjection, "block " + std::to_string(a) + " is not a projection");
    const auto eig = herm_eig(CMatrix((b + b.adjoint()) / 2.0), tol);
    long r = 0;
    for (Index k = 0; k < eig.values.size(); ++k)
      if (eig.values(k) > 0.5) ++r;
    out.v.push_back(r);
  }
  return out;
}

K0Class class_of_projection(const DualAlgebra& dual, const CVector& p, double tol) {
  const double scale = 1.0 + max_abs(p);
  if (max_abs(CVector(sharp(dual, p) - p)) > tol * scale || max_abs(CVector(convolve(dual, p, p) - p)) > tol * scale)
    throw Error(Errc::NotProjection, "element is not a projection of the convolution algebra");
  return class_of_projection(AlgebraElement::from_coefficients(dual.dual_shape(), to_blocks(dual, p)), tol);
}

AssemblyResult assembly_mu0(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                            const ActionDatum& ad, const Cycle& cycle, double tol) {
  AssemblyResult out;
  out.report.append(verify_action_assumptions(qg, haar, ad, tol), "action.");
  out.report.append(check_cycle(qg, ad, cycle, tol), "cycle.");
  if (const Check* bad = out.report.first_failure())
    throw Error(Errc::InvalidInput, "cycle or action fails " + bad->name);
  const Index hd = cycle.hdim();
  const int nb = dual.block_count();

  out.f_prime = average_operator(haar, ad, cycle);
  const CMatrix& fp = out.f_prime;
  out.report.append(check_equivariance(cycle.u, fp, tol), "f_prime_");
  out.report.add("f_prime_hermitian", hermitian_defect(fp), tol * (1.0 + max_abs(fp)));
  out.report.add("f_prime_odd", max_abs(CMatrix(cycle.gamma * fp + fp * cycle.gamma)), tol * (1.0 + max_abs(fp)));

  // Route A: graded index on each multiplicity space.
  const IsotypicData iso = isotypic_decomposition(qg, haar, dual, cycle.u, tol);
  out.report.append(iso.report, "isotypic.");
  const CMatrix gw = iso.basis.adjoint() * cycle.gamma * iso.basis;
  CMatrix expect_gamma = CMatrix::Zero(hd, hd);
  for (int i = 0; i < nb; ++i) {
    const int m = iso.multiplicities[static_cast<std::size_t>(i)];
    const int di = iso.dims[static_cast<std::size_t>(i)];
    if (m == 0) {
      out.plus.push_back(0);
      out.minus.push_back(0);
      out.route_a.v.push_back(0);
      continue;
    }
    const Index o = iso.offset(i);
    const CMatrix v = iso.basis.middleCols(o, m);
    const CMatrix gi = v.adjoint() * cycle.gamma * v;
    expect_gamma.block(o, o, Index(di) * m, Index(di) * m) = kroneckerProduct(CMatrix::Identity(di, di), gi);
    const CMatrix plus = grading_space(gi, +1, tol);
    const CMatrix minus = grading_space(gi, -1, tol);
    CMatrix q(m, m);
    q.leftCols(plus.cols()) = plus;
    q.rightCols(minus.cols()) = minus;
    const CMatrix fi = q.adjoint() * v.adjoint() * fp * v * q;
    out.plus.push_back(static_cast<int>(plus.cols()));
    out.minus.push_back(static_cast<int>(minus.cols()));
    out.route_a.v.push_back(index_even_cycle(plus.cols(), minus.cols(), fi));
  }
  out.report.add("gamma_isotypic", max_abs(CMatrix(gw - expect_gamma)), tol);

  // Route B: projective ranks of the graded Hilbert module.
  const CMatrix ep = grading_space(cycle.gamma, +1, tol);
  const CMatrix em = grading_space(cycle.gamma, -1, tol);
  for (int i = 0; i < nb; ++i)
    out.route_b.v.push_back(module_rank(qg, haar, dual, cycle.u, ep, i, tol) -
                            module_rank(qg, haar, dual, cycle.u, em, i, tol));

  if (!(out.route_a == out.route_b))
    throw Error(Errc::RouteDisagreement, "route A gives " + out.route_a.to_string() + ", route B gives " +
                                             out.route_b.to_string());
  return out;
}

OddAssemblyResult assembly_mu1(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                               const ActionDatum& ad, const Cycle& cycle, double tol) {
  OddAssemblyResult out;
  out.report.append(verify_action_assumptions(qg, haar, ad, tol), "action.");
  out.report.append(check_cycle(qg, ad, cycle, tol, false), "cycle.");
  if (const Check* bad = out.report.first_failure())
    throw Error(Errc::InvalidInput, "cycle or action fails " + bad->name);
  out.f_prime = average_operator(haar, ad, cycle);
  out.report.append(check_equivariance(cycle.u, out.f_prime, tol), "f_prime_");
  out.report.add("f_prime_hermitian", hermitian_defect(out.f_prime), tol * (1.0 + max_abs(out.f_prime)));
  // Each multiplicity space contributes a class in K_1(C) = 0.
  out.cls.v.assign(static_cast<std::size_t>(dual.block_count()), 0);
  return out;
}

Cycle generator_cycle(const IrrepData& irrep) {
  const Index d = irrep.dim;
  return Cycle{irrep.rep, {CMatrix::Identity(d, d)}, CMatrix::Zero(d, d), CMatrix::Identity(d, d)};
}

CMatrix random_odd_operator(const CMatrix& gamma, std::mt19937_64& rng) {
  const CMatrix m = random_hermitian(gamma.rows(), rng);
  return (m - gamma * m * gamma) / 2.0;
}

Cycle random_trivial_cycle(const std::vector<IrrepData>& irreps, const std::vector<int>& plus,
                           const std::vector<int>& minus, std::mt19937_64& rng) {
  if (plus.size() != irreps.size() || minus.size() != irreps.size())
    throw Error(Errc::ShapeMismatch, "random_trivial_cycle: one multiplicity pair per irrep");
  std::vector<int> mult;
  CMatrix gamma(0, 0);
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    mult.push_back(plus[i] + minus[i]);
    if (plus[i] + minus[i] == 0) continue;
    gamma = block_diag(gamma, kroneckerProduct(CMatrix::Identity(irreps[i].dim, irreps[i].dim), grading_diag(plus[i], minus[i])));
  }
  const Representation u = isotypic_sum(irreps, mult);
  const Index hd = u.hdim();
  if (hd == 0) throw Error(Errc::InvalidInput, "random_trivial_cycle: empty Hilbert space");
  Cycle base{u, {CMatrix::Identity(hd, hd)}, CMatrix::Zero(hd, hd), gamma};
  Cycle out = conjugate_cycle(base, random_unitary(hd, rng));
  out.f = random_odd_operator(out.gamma, rng);
  return out;
}

Cycle regular_cycle(const QuantumGroup& qg, const HaarData& haar, double tol) {
  const Representation u = regular_representation(qg, haar, tol);
  const CMatrix gram = l2_gram(qg, haar);
  const CMatrix gs = positive_sqrt(gram, tol);
  const CMatrix gi = inverse_sqrt(gram, tol);
  const Index d = qg.dim();
  std::vector<CMatrix> pi;
  for (Index x = 0; x < d; ++x) pi.push_back(gs * left_multiplication(qg.shape(), qg.shape().unit_vector(x)) * gi);
  return Cycle{u, pi, CMatrix::Zero(d, d), CMatrix::Identity(d, d)};
}

Cycle random_regular_cycle(const QuantumGroup& qg, const HaarData& haar, int p, int q, std::mt19937_64& rng,
                           double tol) {
  if (p < 0 || q < 0 || p + q == 0) throw Error(Errc::InvalidInput, "random_regular_cycle: need p + q > 0");
  const Cycle reg = regular_cycle(qg, haar, tol);
  const CMatrix idk = CMatrix::Identity(p + q, p + q);
  std::vector<CMatrix> coeffs;
  for (Index k = 0; k < qg.dim(); ++k) coeffs.push_back(kroneckerProduct(reg.u.u.coefficient(k), idk));
  std::vector<CMatrix> pi;
  for (const auto& m : reg.pi) pi.push_back(kroneckerProduct(m, idk));
  const Index hd = qg.dim() * (p + q);
  Cycle base{representation_from_coefficients("regular", qg.shape(), coeffs), pi, CMatrix::Zero(hd, hd),
             kroneckerProduct(CMatrix::Identity(qg.dim(), qg.dim()), grading_diag(p, q))};
  Cycle out = conjugate_cycle(base, random_unitary(hd, rng));
  out.f = random_odd_operator(out.gamma, rng);
  return out;
}

Cycle conjugate_cycle(const Cycle& c, const CMatrix& w) {
  Cycle out{conjugate(c.u, w), {}, w * c.f * w.adjoint(), w * c.gamma * w.adjoint()};
  for (const auto& p : c.pi) out.pi.push_back(w * p * w.adjoint());
  return out;
}

Cycle direct_sum_cycle(const Cycle& a, const Cycle& b) {
  if (a.pi.size() != b.pi.size()) throw Error(Errc::ShapeMismatch, "direct_sum_cycle: cycles over different algebras");
  Cycle out{direct_sum(a.u, b.u), {}, block_diag(a.f, b.f), block_diag(a.gamma, b.gamma)};
  for (std::size_t x = 0; x < a.pi.size(); ++x) out.pi.push_back(block_diag(a.pi[x], b.pi[x]));
  return out;
}

}  // namespace dqg
