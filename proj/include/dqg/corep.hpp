#pragma once

// Unitary representations U = sum_k U_k (x) e_k in B(H) (x) A, the right
// action of the convolution algebra they induce on H, and the Peter-Weyl
// splitting of H into irreducible pieces.

#include <string>
#include <vector>

#include "dqg/check.hpp"
#include "dqg/dual.hpp"
#include "dqg/groups.hpp"

namespace dqg {

/// Largest Hilbert space dimension accepted by the decomposition routines.
inline constexpr Index kMaxHilbertDim = 512;

struct Representation {
  std::string name;
  OperatorTensor u;

  Representation(std::string n, OperatorTensor op) : name(std::move(n)), u(std::move(op)) {}
  Index hdim() const { return u.hdim(); }
  const BlockShape& shape() const { return u.shape(); }
};

/// sum_k coeffs[k] (x) e_k.
Representation representation_from_coefficients(std::string name, const BlockShape& shape,
                                                const std::vector<CMatrix>& coeffs);
/// 1 (x) 1 on C^hdim.
Representation trivial_representation(const BlockShape& shape, Index hdim = 1);
/// Block diagonal U (+) V.
Representation direct_sum(const Representation& a, const Representation& b);
/// (W (x) 1) U (W^dagger (x) 1).
Representation conjugate(const Representation& r, const CMatrix& w);

/// Unitarity, (id (x) Delta)U = U12 U13 and (id (x) S)U = U^*.
CheckReport check_representation(const QuantumGroup& qg, const Representation& r, double tol);

/// T_{xi,eta}(X) = sum_k <xi, X_k eta> e_k; antilinear in xi.
AlgebraElement slice_T(const CVector& xi, const CVector& eta, const OperatorTensor& x);

/// Weights w_k with R(a) = sum_k w_k U_k, w_k = psi(e_k theta^-1 S(a) theta^-2).
CVector action_weights(const QuantumGroup& qg, const HaarData& haar, const CVector& a);
/// The same weights from psi(S^-1(e_k) theta a).
CVector action_weights_inverse_form(const QuantumGroup& qg, const HaarData& haar, const CVector& a);

/// R(a) = (id (x) psi_{theta^-1 S(a) theta^-2})(U). This is a right action:
/// R(a * b) = R(b) R(a). Both weight formulas are evaluated and must agree,
/// otherwise FormulaMismatch.
CMatrix induced_dual_action(const QuantumGroup& qg, const HaarData& haar, const Representation& r,
                            const CVector& a, double tol);

/// R(unit) = 1, R(a * b) = R(b) R(a) and R(a#) = R(a)^dagger over the basis.
CheckReport check_induced_action(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                                 const Representation& r, double tol);

struct IrrepData {
  int block = 0;
  int dim = 0;
  Representation rep;
  /// u_{kl} * u_{pq} = c delta_{lp} u_{kq}.
  cplx convolution_constant = 0.0;
  CheckReport report;
};

/// U^(sigma_i) with entries in A, solved from the psi-pairing so that its
/// induced action sends f^i_{lk} to the matrix unit E_{kl} and kills the
/// other blocks.
IrrepData irrep_matrix_elements(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, int i,
                                double tol);

struct IsotypicData {
  std::vector<int> dims;            // d_i
  std::vector<int> multiplicities;  // m_i
  /// Unitary whose columns w_{i,k,r} span C^{d_i} (x) H_i, ordered by block,
  /// then k, then r.
  CMatrix basis;
  std::vector<IrrepData> irreps;
  CheckReport report;

  /// First column of block i.
  Index offset(int i) const;
};

/// Splits H with the central projections and matrix units of the dual pushed
/// through the induced action. Throws ProjectionDefect when the pieces do not
/// fill H and TooLarge above kMaxHilbertDim.
IsotypicData isotypic_decomposition(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                                    const Representation& r, double tol);

/// Gram matrix phi(e_k^* e_l) of L^2(phi) in the canonical basis.
CMatrix l2_gram(const QuantumGroup& qg, const HaarData& haar);

/// U_k e_j = sum_x Delta_{(x,k),j} e_x on L^2(phi), in phi-orthonormal
/// coordinates, i.e. U(xi (x) b) = Delta(xi)(1 (x) b).
Representation regular_representation(const QuantumGroup& qg, const HaarData& haar, double tol);
/// sum_g lambda_g (x) delta_g on l^2(G) for C(G).
Representation group_regular_representation(const Group& g);

/// (+)_i U^(sigma_i) (x) I_{m_i}; the building block of covariant test cycles.
Representation isotypic_sum(const std::vector<IrrepData>& irreps, const std::vector<int>& multiplicities);

}  // namespace dqg
