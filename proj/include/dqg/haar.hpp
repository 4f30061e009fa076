#pragma once

// Invariant functionals, the counit block and the modular element.

#include <vector>

#include "dqg/check.hpp"
#include "dqg/config.hpp"
#include "dqg/hopf.hpp"
#include "dqg/multimatrix.hpp"

namespace dqg {

struct HaarData {
  HaarNormalization mode = HaarNormalization::CounitBlock;
  CVector phi;  // phi(e_k)
  CVector psi;  // psi(e_k) = phi(e_k theta^2)
  AlgebraElement theta;
  AlgebraElement theta_inv;
  int alpha0 = 0;
  AlgebraElement h0;
  /// Density matrices: phi(a) = sum_a Tr(rho_a a_a).
  std::vector<CMatrix> rho;
  /// Every identity below checked over the full basis.
  CheckReport identities;

  HaarData() : theta(BlockShape({1})), theta_inv(BlockShape({1})), h0(BlockShape({1})) {}
};

/// The unique one-dimensional block with e_a x = x e_a = eps(x) e_a.
struct CounitBlock {
  int alpha0;
  AlgebraElement h0;
};
CounitBlock find_counit_block(const QuantumGroup& qg, double tol);

/// Left invariant functional, unnormalised: (id (x) phi)Delta(a) = phi(a)1,
/// phase fixed by making the first nonzero coordinate positive.
CVector solve_left_haar(const QuantumGroup& qg, double tol);
/// Right invariant functional, unnormalised.
CVector solve_right_haar(const QuantumGroup& qg, double tol);

/// Residual of left (right) invariance of a functional over the basis.
double left_invariance_residual(const QuantumGroup& qg, const CVector& f);
double right_invariance_residual(const QuantumGroup& qg, const CVector& f);

/// rho_a[j][i] = f(e^a_{ij}).
std::vector<CMatrix> density_matrices(const BlockShape& shape, const CVector& f);

/// theta from phi and an unnormalised right invariant functional; the scale is
/// fixed by S(theta) = theta^{-1}.
AlgebraElement compute_theta(const QuantumGroup& qg, const CVector& phi, const CVector& psi_raw, double tol);

/// Full pipeline: counit block, phi, psi, theta and the identity checks.
HaarData compute_haar(const QuantumGroup& qg, const Config& cfg = {});

/// Evaluate a functional given by basis values.
cplx apply_functional(const CVector& f, const CVector& a);

/// (id (x) phi) on B(H) (x) A.
CMatrix slice_id_phi(const OperatorTensor& x, const HaarData& haar);

/// Bilinear form B[k][l] = f(e_k e_l).
CMatrix product_form(const BlockShape& shape, const CVector& f);

}  // namespace dqg
