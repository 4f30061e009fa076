#pragma once

// The convolution algebra on the carrier of A: product, sharp involution, GNS
// representation on L^2(phi), Wedderburn decomposition into matrix blocks, and
// the dual quantum group built from it.

#include <cstdint>
#include <vector>

#include "dqg/check.hpp"
#include "dqg/config.hpp"
#include "dqg/haar.hpp"
#include "dqg/hopf.hpp"

namespace dqg {

struct DualAlgebra {
  BlockShape carrier;
  /// D x D^2; column a * D + b holds the coefficients of e_a * e_b.
  CMatrix table;
  /// a^# = sharp_matrix * conj(a).
  CMatrix sharp_matrix;
  /// Convolution unit.
  CVector unit;
  /// Gram matrix G_kl = phi(e_k^* e_l) and its square roots.
  CMatrix gram;
  CMatrix gram_sqrt;
  CMatrix gram_isqrt;
  /// Largest disagreement between the two convolution formulas.
  double formula_residual = 0.0;

  // Wedderburn data (filled by wedderburn_decompose).
  std::vector<int> dims;
  std::vector<CVector> central;  // minimal central projections z_i
  /// Columns are the matrix units f^i_{kl}, ordered like BlockShape(dims).
  CMatrix units;
  CMatrix units_inv;
  std::uint64_t seed = 0;
  int attempts = 0;

  CheckReport checks;

  Index dim() const { return carrier.dim(); }
  int block_count() const { return static_cast<int>(dims.size()); }
  BlockShape dual_shape() const { return BlockShape(dims); }
  /// f^i_{kl} as an element of the carrier.
  CVector unit_element(int i, int k, int l) const;
};

/// Both convolution formulas on the full basis; throws FormulaMismatch when
/// they disagree.
DualAlgebra build_dual(const QuantumGroup& qg, const HaarData& haar, double tol);

/// The two convolution tables separately (for cross-checking).
struct ConvolutionTables {
  CMatrix psi_form;  // (id (x) psi)((1 (x) b)(id (x) S^-1)Delta(a))
  CMatrix phi_form;  // (phi (x) id)((a (x) 1)(S (x) id)Delta(b))
};
ConvolutionTables convolution_tables(const QuantumGroup& qg, const HaarData& haar);

CVector convolve(const DualAlgebra& dual, const CVector& a, const CVector& b);
CVector sharp(const DualAlgebra& dual, const CVector& a);
/// Matrix of b -> a * b (L) and b -> b * a (R) in the canonical basis.
CMatrix left_convolution(const DualAlgebra& dual, const CVector& a);
CMatrix right_convolution(const DualAlgebra& dual, const CVector& a);

/// L_a in a phi-orthonormal basis of L^2(phi).
CMatrix gns_operator(const DualAlgebra& dual, const CVector& a);
/// max_k |L_{e_k^#} - L_{e_k}^dagger|; throws NotStarRep above tol.
double gns_star_residual(const DualAlgebra& dual, double tol);

/// Minimal central projections and matrix units. Ordered by block dimension,
/// the trivial block (largest |psi(z)|) first, then by the coefficients of z.
void wedderburn_decompose(DualAlgebra& dual, const HaarData& haar, const Config& cfg);

/// Coefficients of the carrier element a in the matrix-unit basis of the
/// dual blocks (the *-isomorphism onto the direct sum of M_{d_i}).
CVector to_blocks(const DualAlgebra& dual, const CVector& a);
CVector from_blocks(const DualAlgebra& dual, const CVector& x);

/// Build, verify and decompose in one call.
DualAlgebra make_dual(const QuantumGroup& qg, const HaarData& haar, const Config& cfg);

/// The dual quantum group on shape (d_i), coproduct transposed from the
/// product of A under <a, x> = psi(a x). The result has passed check_axioms.
QuantumGroup dualize(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, const Config& cfg);

struct BidualityReport {
  CheckReport report;
  /// J: A -> carrier of the double dual, as a matrix.
  CMatrix map;
};
/// Compares A with dualize(dualize(A)) under the canonical map.
BidualityReport check_biduality(const QuantumGroup& qg, const Config& cfg);

}  // namespace dqg
