#include "dqg/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dqg/kernel.hpp"

namespace dqg {

namespace {

double max_abs(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CMatrix transpose_permutation(const BlockShape& s) {
  const Index d = s.dim();
  CMatrix p = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) p(s.transpose_index(k), k) = 1.0;
  return p;
}

// Orders central projections: dimension, trivial block first, then coefficients.
bool coefficient_less(const CVector& a, const CVector& b) {
  for (Index k = 0; k < a.size(); ++k) {
    const double ar = std::round(a(k).real() * 1e6), br = std::round(b(k).real() * 1e6);
    if (ar != br) return ar < br;
    const double ai = std::round(a(k).imag() * 1e6), bi = std::round(b(k).imag() * 1e6);
    if (ai != bi) return ai < bi;
  }
  return false;
}

struct Spectral {
  std::vector<CMatrix> bases;  // orthonormal eigenbasis per cluster, ascending
  double min_gap = 0.0;        // smallest gap between clusters relative to the spread
};

Spectral spectral_clusters(const CMatrix& m, double tol) {
  const auto eig = herm_eig(m, tol);
  const auto starts = cluster_eigenvalues(eig.values, 1e-6);
  Spectral out;
  const Index n = eig.values.size();
  const double spread = n ? eig.values(n - 1) - eig.values(0) : 0.0;
  out.min_gap = 1.0;
  for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
    out.bases.push_back(eig.vectors.middleCols(starts[c], starts[c + 1] - starts[c]));
    if (c > 0 && spread > 0)
      out.min_gap = std::min(out.min_gap, (eig.values(starts[c]) - eig.values(starts[c] - 1)) / spread);
  }
  return out;
}

// Eigenvalue gaps below this fraction of the spread make the spectral
// projections too inaccurate; such a random element is discarded.
constexpr double kMinGap = 1e-3;

// A few Newton steps pull a near-projection (p^# = p, p * p = p) back onto
// the projections; spectral projections come out only to about eps / gap.
CVector polish_projection(const DualAlgebra& dual, CVector p) {
  for (int it = 0; it < 3; ++it) {
    const CVector p2 = convolve(dual, p, p);
    p = 3.0 * p2 - 2.0 * convolve(dual, p2, p);
    p = (p + sharp(dual, p)) / 2.0;
  }
  return p;
}

// Newton-Schulz steps towards a partial isometry with u^# u = q, u u^# = p.
CVector polish_isometry(const DualAlgebra& dual, CVector u, const CVector& p, const CVector& q) {
  for (int it = 0; it < 3; ++it) {
    u = 1.5 * u - 0.5 * convolve(dual, convolve(dual, u, sharp(dual, u)), u);
    u = convolve(dual, convolve(dual, p, u), q);
  }
  return u;
}

}  // namespace

CVector DualAlgebra::unit_element(int i, int k, int l) const {
  return units.col(BlockShape(dims).index(i, k, l));
}

ConvolutionTables convolution_tables(const QuantumGroup& qg, const HaarData& haar) {
  require_verified(qg);
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const CMatrix psi_s = product_form(s, haar.psi) * qg.antipode_inverse();  // psi(e_b S^-1(e_y))
  const CMatrix phi_s = product_form(s, haar.phi) * qg.antipode_matrix();   // phi(e_a S(e_x))
  ConvolutionTables t{CMatrix::Zero(d, d * d), CMatrix::Zero(d, d * d)};
  for (const auto& e : qg.delta().entries()) {
    const Index x = e.target / d;
    const Index y = e.target % d;
    const Index src = e.source;
    for (Index b = 0; b < d; ++b) t.psi_form(x, src * d + b) += e.value * psi_s(b, y);
    for (Index a = 0; a < d; ++a) t.phi_form(y, a * d + src) += e.value * phi_s(a, x);
  }
  return t;
}

DualAlgebra build_dual(const QuantumGroup& qg, const HaarData& haar, double tol) {
  require_verified(qg);
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  DualAlgebra dual;
  dual.carrier = s;

  const ConvolutionTables t = convolution_tables(qg, haar);
  dual.formula_residual = max_abs(CMatrix(t.psi_form - t.phi_form));
  if (dual.formula_residual > tol * (1.0 + max_abs(t.psi_form)))
    throw Error(Errc::FormulaMismatch, "the two convolution formulas disagree");
  dual.table = t.psi_form;

  AlgebraElement theta_m2 = haar.theta_inv * haar.theta_inv;
  dual.sharp_matrix = left_multiplication(s, theta_m2.coefficients()) * qg.antipode_inverse() * transpose_permutation(s);

  CMatrix sys(2 * d * d, d);
  CVector rhs = CVector::Zero(2 * d * d);
  for (Index b = 0; b < d; ++b)
    for (Index x = 0; x < d; ++x) {
      for (Index a = 0; a < d; ++a) {
        sys(b * d + x, a) = dual.table(x, a * d + b);
        sys(d * d + b * d + x, a) = dual.table(x, b * d + a);
      }
      if (x == b) rhs(b * d + x) = rhs(d * d + b * d + x) = 1.0;
    }
  dual.unit = solve_unique(sys, rhs, tol, "convolution unit");

  const CMatrix bphi = product_form(s, haar.phi);
  dual.gram.resize(d, d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) dual.gram(k, l) = bphi(s.transpose_index(k), l);
  dual.gram_sqrt = positive_sqrt(dual.gram, tol);
  dual.gram_isqrt = inverse_sqrt(dual.gram, tol);

  // Structure checks.
  auto& rep = dual.checks;
  rep.add("convolution_formulas_agree", dual.formula_residual, tol * (1.0 + max_abs(t.psi_form)));

  std::mt19937_64 rng(kDefaultSeed);
  double assoc = 0.0, sharp_inv = 0.0, sharp_anti = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const CVector a = random_cvector(d, rng), b = random_cvector(d, rng), c = random_cvector(d, rng);
    const double scale = 1.0 + a.norm() * b.norm() * c.norm();
    assoc = std::max(assoc, max_abs(CVector(convolve(dual, convolve(dual, a, b), c) - convolve(dual, a, convolve(dual, b, c)))) / scale);
    sharp_inv = std::max(sharp_inv, max_abs(CVector(sharp(dual, sharp(dual, a)) - a)) / (1.0 + a.norm()));
    sharp_anti = std::max(sharp_anti, max_abs(CVector(sharp(dual, convolve(dual, a, b)) -
                                                        convolve(dual, sharp(dual, b), sharp(dual, a)))) / scale);
  }
  rep.add("convolution_associative", assoc, tol);
  rep.add("sharp_involutive", sharp_inv, tol);
  rep.add("sharp_anti_multiplicative", sharp_anti, tol);

  // psi_a * psi_b = psi_{a*b} with psi_a(x) = psi(x a) and (f*g)(x) = (f (x) g)Delta(x).
  const CMatrix bpsi = product_form(s, haar.psi);
  const CMatrix psi_fn = bpsi;  // psi_a = bpsi * a
  const CMatrix delta = map_as_matrix(qg.delta());
  double fconv = 0.0, fstar = 0.0;
  const CMatrix p = transpose_permutation(s);
  const CMatrix& sm = qg.antipode_matrix();
  for (Index a = 0; a < d; ++a) {
    const CVector fa = psi_fn.col(a);
    for (Index b = 0; b < d; ++b) {
      const CVector fb = psi_fn.col(b);
      CVector conv(d);
      for (Index k = 0; k < d; ++k) {
        cplx acc = 0.0;
        for (Index x = 0; x < d; ++x)
          for (Index y = 0; y < d; ++y) acc += delta(x * d + y, k) * fa(x) * fb(y);
        conv(k) = acc;
      }
      fconv = std::max(fconv, max_abs(CVector(conv - psi_fn * dual.table.col(a * d + b))));
    }
    // f^*(x) = conj f(S(x)^*)
    const CVector fs = (sm.transpose() * p.transpose() * fa.conjugate());
    fstar = std::max(fstar, max_abs(CVector(fs - psi_fn * sharp(dual, s.unit_vector(a)))));
  }
  const double fscale = 1.0 + max_abs(bpsi);
  rep.add("functional_convolution", fconv, tol * fscale);
  rep.add("functional_star", fstar, tol * fscale);
  rep.add("gns_star_representation", gns_star_residual(dual, tol), tol);
  return dual;
}

CVector convolve(const DualAlgebra& dual, const CVector& a, const CVector& b) {
  const Index d = dual.dim();
  if (a.size() != d || b.size() != d) throw Error(Errc::ShapeMismatch, "convolve: wrong length");
  CVector out = CVector::Zero(d);
  for (Index i = 0; i < d; ++i) {
    if (a(i) == cplx(0.0)) continue;
    out += a(i) * (dual.table.middleCols(i * d, d) * b);
  }
  return out;
}

CVector sharp(const DualAlgebra& dual, const CVector& a) { return dual.sharp_matrix * a.conjugate(); }

CMatrix left_convolution(const DualAlgebra& dual, const CVector& a) {
  const Index d = dual.dim();
  CMatrix l = CMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    if (a(i) != cplx(0.0)) l += a(i) * dual.table.middleCols(i * d, d);
  return l;
}

CMatrix right_convolution(const DualAlgebra& dual, const CVector& a) {
  const Index d = dual.dim();
  CMatrix r(d, d);
  for (Index b = 0; b < d; ++b) r.col(b) = convolve(dual, dual.carrier.unit_vector(b), a);
  return r;
}

CMatrix gns_operator(const DualAlgebra& dual, const CVector& a) {
  return dual.gram_sqrt * left_convolution(dual, a) * dual.gram_isqrt;
}

double gns_star_residual(const DualAlgebra& dual, double tol) {
  double r = 0.0;
  for (Index k = 0; k < dual.dim(); ++k) {
    const CVector e = dual.carrier.unit_vector(k);
    r = std::max(r, max_abs(CMatrix(gns_operator(dual, sharp(dual, e)) - gns_operator(dual, e).adjoint())));
  }
  if (r > tol) throw Error(Errc::NotStarRep, "L_{a#} differs from L_a^dagger");
  return r;
}

void wedderburn_decompose(DualAlgebra& dual, const HaarData& haar, const Config& cfg) {
  const double tol = cfg.tol;
  const Index d = dual.dim();

  CMatrix comm(d * d, d);
  for (Index k = 0; k < d; ++k) {
    const CVector e = dual.carrier.unit_vector(k);
    comm.middleRows(k * d, d) = right_convolution(dual, e) - left_convolution(dual, e);
  }
  const CMatrix center = nullspace(comm, tol, 1.0 + max_abs(dual.table));
  const Index nc = center.cols();
  if (nc == 0) throw Error(Errc::CenterNotSplit, "convolution algebra has trivial center");

  std::mt19937_64 rng(cfg.seed);
  std::vector<CVector> zs;
  std::vector<CMatrix> ranges;  // orthonormal basis (GNS coordinates) of each block
  int attempt = 0;
  for (; attempt < 8; ++attempt) {
    zs.clear();
    ranges.clear();
    if (nc == 1) {
      zs.push_back(dual.unit);
      ranges.push_back(CMatrix::Identity(d, d));
      break;
    }
    CVector c = center * random_cvector(nc, rng);
    c = (c + sharp(dual, c)) / 2.0;
    const CMatrix m = gns_operator(dual, c);
    const Spectral sp = spectral_clusters((m + m.adjoint()) / 2.0, tol);
    if (static_cast<Index>(sp.bases.size()) != nc || sp.min_gap < kMinGap) continue;
    for (const auto& v : sp.bases) {
      const CMatrix proj = dual.gram_isqrt * v * v.adjoint() * dual.gram_sqrt;
      zs.push_back(polish_projection(dual, proj * dual.unit));
      ranges.push_back(v);
    }
    break;
  }
  if (attempt == 8) throw Error(Errc::CenterNotSplit, "could not separate the central projections");
  dual.attempts = attempt + 1;
  dual.seed = cfg.seed;

  std::vector<int> dims;
  for (const auto& v : ranges) {
    const Index r = v.cols();
    const int di = static_cast<int>(std::lround(std::sqrt(static_cast<double>(r))));
    if (Index(di) * di != r) throw Error(Errc::CenterNotSplit, "central block has non-square dimension " + std::to_string(r));
    dims.push_back(di);
  }

  // Order blocks.
  std::size_t trivial = 0;
  for (std::size_t i = 1; i < zs.size(); ++i)
    if (std::abs(apply_functional(haar.psi, zs[i])) > std::abs(apply_functional(haar.psi, zs[trivial]))) trivial = i;
  std::vector<std::size_t> order(zs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dims[a] != dims[b]) return dims[a] < dims[b];
    if ((a == trivial) != (b == trivial)) return a == trivial;
    return coefficient_less(zs[a], zs[b]);
  });

  dual.dims.clear();
  dual.central.clear();
  std::vector<CMatrix> sorted_ranges;
  for (std::size_t i : order) {
    dual.dims.push_back(dims[i]);
    dual.central.push_back(zs[i]);
    sorted_ranges.push_back(ranges[i]);
  }

  // Matrix units per block.
  const BlockShape shape(dual.dims);
  dual.units = CMatrix::Zero(d, d);
  for (int i = 0; i < static_cast<int>(dual.dims.size()); ++i) {
    const int di = dual.dims[static_cast<std::size_t>(i)];
    const CVector& z = dual.central[static_cast<std::size_t>(i)];
    if (di == 1) {
      dual.units.col(shape.index(i, 0, 0)) = z;
      continue;
    }
    const CMatrix& v = sorted_ranges[static_cast<std::size_t>(i)];
    bool done = false;
    for (int tries = 0; tries < 16 && !done; ++tries) {
      CVector x = convolve(dual, convolve(dual, z, random_cvector(d, rng)), z);
      x = (x + sharp(dual, x)) / 2.0;
      const CMatrix mx = v.adjoint() * gns_operator(dual, x) * v;
      const Spectral sp = spectral_clusters((mx + mx.adjoint()) / 2.0, tol);
      if (static_cast<int>(sp.bases.size()) != di || sp.min_gap < kMinGap) continue;
      bool even = true;
      for (const auto& b : sp.bases) even = even && b.cols() == di;
      if (!even) continue;

      std::vector<CVector> p;
      for (const auto& b : sp.bases) {
        const CMatrix w = v * b;
        p.push_back(polish_projection(dual, dual.gram_isqrt * w * w.adjoint() * dual.gram_sqrt * z));
      }
      std::vector<CVector> col(static_cast<std::size_t>(di));  // e_{k1}
      col[0] = p[0];
      bool ok = true;
      for (int k = 1; k < di && ok; ++k) {
        const CVector w = convolve(dual, convolve(dual, p[static_cast<std::size_t>(k)], random_cvector(d, rng)), p[0]);
        const CVector g = convolve(dual, sharp(dual, w), w);
        const cplx lam = p[0].dot(g) / p[0].squaredNorm();
        if (lam.real() <= 0.0 || max_abs(CVector(g - lam.real() * p[0])) > 10.0 * tol * (1.0 + max_abs(g))) {
          ok = false;
          break;
        }
        col[static_cast<std::size_t>(k)] = polish_isometry(dual, w / std::sqrt(lam.real()), p[static_cast<std::size_t>(k)], p[0]);
      }
      if (!ok) continue;
      std::vector<CVector> e(static_cast<std::size_t>(di * di));
      auto at = [&](int k, int l) -> CVector& { return e[static_cast<std::size_t>(k * di + l)]; };
      for (int k = 0; k < di; ++k)
        for (int l = 0; l < di; ++l)
          at(k, l) = convolve(dual, col[static_cast<std::size_t>(k)], sharp(dual, col[static_cast<std::size_t>(l)]));

      // Accept only matrix units that satisfy their relations to tolerance.
      double rel = 0.0;
      CVector sum = CVector::Zero(d);
      for (int k = 0; k < di; ++k) {
        sum += at(k, k);
        for (int l = 0; l < di; ++l) {
          rel = std::max(rel, max_abs(CVector(sharp(dual, at(k, l)) - at(l, k))));
          for (int m = 0; m < di; ++m)
            for (int n = 0; n < di; ++n) {
              const CVector expect = l == m ? at(k, n) : CVector::Zero(d);
              rel = std::max(rel, max_abs(CVector(convolve(dual, at(k, l), at(m, n)) - expect)));
            }
        }
      }
      rel = std::max(rel, max_abs(CVector(sum - z)));
      if (rel > tol * (1.0 + max_abs(z))) continue;
      for (int k = 0; k < di; ++k)
        for (int l = 0; l < di; ++l) dual.units.col(shape.index(i, k, l)) = at(k, l);
      done = true;
    }
    if (!done) throw Error(Errc::CenterNotSplit, "could not build matrix units for block " + std::to_string(i));
  }

  Eigen::FullPivLU<CMatrix> lu(dual.units);
  if (!lu.isInvertible()) throw Error(Errc::CenterNotSplit, "matrix units are not a basis");
  dual.units_inv = lu.inverse();

  // The coordinate map must be a *-isomorphism.
  double hom = 0.0, star_res = 0.0;
  for (Index a = 0; a < d; ++a) {
    const CVector ea = dual.carrier.unit_vector(a);
    const CVector xa = to_blocks(dual, ea);
    for (Index b = 0; b < d; ++b) {
      const CVector eb = dual.carrier.unit_vector(b);
      const CVector lhs = to_blocks(dual, convolve(dual, ea, eb));
      hom = std::max(hom, max_abs(CVector(lhs - multiply(shape, xa, to_blocks(dual, eb)))));
    }
    star_res = std::max(star_res, max_abs(CVector(to_blocks(dual, sharp(dual, ea)) - star(shape, xa))));
  }
  Index total = 0;
  for (int di : dual.dims) total += Index(di) * di;
  const double scale = 1.0 + max_abs(dual.units_inv);
  dual.checks.add("wedderburn_dimension_count", static_cast<double>(std::abs(total - d)), 0.0);
  dual.checks.add("wedderburn_homomorphism", hom, tol * scale);
  dual.checks.add("wedderburn_star", star_res, tol * scale);
}

CVector to_blocks(const DualAlgebra& dual, const CVector& a) { return dual.units_inv * a; }
CVector from_blocks(const DualAlgebra& dual, const CVector& x) { return dual.units * x; }

DualAlgebra make_dual(const QuantumGroup& qg, const HaarData& haar, const Config& cfg) {
  DualAlgebra dual = build_dual(qg, haar, cfg.tol);
  wedderburn_decompose(dual, haar, cfg);
  return dual;
}

QuantumGroup dualize(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, const Config& cfg) {
  require_verified(qg);
  if (dual.dims.empty()) throw Error(Errc::Unverified, "dualize needs a Wedderburn decomposition");
  const BlockShape& s = qg.shape();
  const Index d = s.dim();
  const BlockShape ns(dual.dims);

  // P[m][x] = psi(f_m e_x)
  const CMatrix p = dual.units.transpose() * product_form(s, haar.psi);
  Eigen::FullPivLU<CMatrix> lu(p);
  if (!lu.isInvertible()) throw Error(Errc::NoSolution, "the psi-pairing is degenerate");
  const CMatrix pinv = lu.inverse();

  std::vector<StructureMap::Entry> entries;
  CMatrix coeffs(d * d, d);
  for (Index m = 0; m < d; ++m) {
    CMatrix q = CMatrix::Zero(d, d);
    for (Index x = 0; x < d; ++x)
      for (Index y = 0; y < d; ++y) {
        const Index z = basis_product(s, x, y);
        if (z >= 0) q(x, y) = p(m, z);
      }
    const CMatrix c = pinv.transpose() * q * pinv;
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) coeffs(a * d + b, m) = c(a, b);
  }
  const double drop = 1e-12 * std::max(1.0, max_abs(coeffs));
  for (Index m = 0; m < d; ++m)
    for (Index t = 0; t < d * d; ++t)
      if (std::abs(coeffs(t, m)) > drop) entries.push_back({t, m, coeffs(t, m)});

  QuantumGroup out("dual(" + qg.name() + ")", ns,
                   StructureMap::from_entries(Space::algebra(ns), Space::tensor(ns, ns), entries));
  const AxiomReport r = check_axioms(out, cfg);
  if (!r.verified()) throw Error(Errc::Unverified, "dual quantum group fails " + r.report.first_failure()->name + " " + r.detail);
  return out;
}

BidualityReport check_biduality(const QuantumGroup& qg, const Config& cfg) {
  require_verified(qg);
  const double tol = 1e-8;
  const BlockShape& s = qg.shape();
  const Index d = s.dim();

  const HaarData h0 = compute_haar(qg, cfg);
  const DualAlgebra d0 = make_dual(qg, h0, cfg);
  const QuantumGroup q1 = dualize(qg, h0, d0, cfg);
  const HaarData h1 = compute_haar(q1, cfg);
  const DualAlgebra d1 = make_dual(q1, h1, cfg);
  const QuantumGroup q2 = dualize(q1, h1, d1, cfg);
  const HaarData h2 = compute_haar(q2, cfg);
  const DualAlgebra d2 = make_dual(q2, h2, cfg);

  BidualityReport out;
  auto& rep = out.report;
  rep.add("bidual_dimension", static_cast<double>(std::abs(q2.dim() - d)), 0.0);
  if (q2.dim() != d) return out;

  // psi_1(y e'_m) = psi(f_m x): y = B1^{-T} P x, then coordinates in q2.
  const CMatrix p = d0.units.transpose() * product_form(s, h0.psi);
  const CMatrix b1 = product_form(q1.shape(), h1.psi);
  const CMatrix y = b1.transpose().fullPivLu().solve(p);
  out.map = d1.units_inv * y;
  const CMatrix& j = out.map;
  const BlockShape& s2 = q2.shape();

  double prod = 0.0, st = 0.0, conv = 0.0;
  for (Index a = 0; a < d; ++a) {
    const CVector ea = s.unit_vector(a);
    for (Index b = 0; b < d; ++b) {
      const CVector eb = s.unit_vector(b);
      prod = std::max(prod, max_abs(CVector(j * multiply(s, ea, eb) - multiply(s2, j * ea, j * eb))));
      conv = std::max(conv, max_abs(CVector(j * convolve(d0, ea, eb) - convolve(d2, j * ea, j * eb))));
    }
    st = std::max(st, max_abs(CVector(j * star(s, ea) - star(s2, j * ea))));
  }
  CMatrix jj(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) jj.block(a * d, b * d, d, d) = j(a, b) * j;
  const double cop = max_abs(CMatrix(jj * map_as_matrix(qg.delta()) - map_as_matrix(q2.delta()) * j));

  rep.add("bidual_product", prod, tol);
  rep.add("bidual_star", st, tol);
  rep.add("bidual_coproduct", cop, tol);
  rep.add("bidual_convolution", conv, tol);
  return out;
}

}  // namespace dqg
