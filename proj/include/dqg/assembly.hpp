#pragma once

// Equivariant even cycles over a quantum group action, the averaging of F to
// an equivariant operator, the Hilbert module over the convolution algebra
// built from H, K_0 classes, and the assembly map mu_0 computed two ways.

#include <random>
#include <string>
#include <vector>

#include "dqg/corep.hpp"

namespace dqg {

/// A coaction Delta_C: C -> C (x) A on a multi-matrix algebra C with a
/// positive h such that (id (x) phi)(Delta_C(h^2)) = 1.
struct ActionDatum {
  std::string name;
  BlockShape shape;
  StructureMap coaction;
  CVector h;
};

/// C = the scalars, Delta_C(1) = 1 (x) 1, h = phi(1)^{-1/2}.
ActionDatum trivial_action(const QuantumGroup& qg, const HaarData& haar);
/// C = A with Delta_C = Delta and h = h0 / sqrt(phi(h0)).
ActionDatum self_action(const QuantumGroup& qg, const HaarData& haar);

/// Coassociativity, *-homomorphism and unitality of Delta_C, positivity of h
/// and (id (x) phi)(Delta_C(h^2)) = 1. The algebraic density conditions hold
/// trivially in finite dimension and are recorded as flags.
CheckReport verify_action_assumptions(const QuantumGroup& qg, const HaarData& haar, const ActionDatum& ad, double tol);

/// Even equivariant cycle: U on H, pi(c_x) for each basis element of C,
/// F Hermitian and odd, gamma a grading commuting with U and pi.
struct Cycle {
  Representation u;
  std::vector<CMatrix> pi;
  CMatrix f;
  CMatrix gamma;

  Index hdim() const { return u.hdim(); }
};

/// pi(c) for a coefficient vector c of C.
CMatrix pi_of(const Cycle& cycle, const CVector& c);

/// Representation checks, pi a unital *-homomorphism, covariance
/// (pi (x) id)Delta_C(c) = U(pi(c) (x) 1)U^*, and F Hermitian. With
/// `graded`, also gamma^2 = 1, gamma commuting with U and pi, F odd.
CheckReport check_cycle(const QuantumGroup& qg, const ActionDatum& ad, const Cycle& cycle, double tol,
                        bool graded = true);

/// F' = (id (x) phi)(U(pi(h) F pi(h) (x) 1)U^*).
CMatrix average_operator(const HaarData& haar, const ActionDatum& ad, const Cycle& cycle);

/// max |U(T (x) 1)U^* - T (x) 1|.
CheckReport check_equivariance(const Representation& u, const CMatrix& t, double tol);

/// <xi, eta> = theta^-1 T_{xi,eta}(U), an element of the convolution algebra.
CVector module_inner_product(const QuantumGroup& qg, const HaarData& haar, const Representation& u,
                             const CVector& xi, const CVector& eta);

/// Sigma(xi) = ((pi(h) (x) theta^-1)U)xi as an hdim x D matrix (column k pairs with e_k).
VectorTensor sigma_map(const QuantumGroup& qg, const HaarData& haar, const ActionDatum& ad, const Cycle& cycle,
                       const CVector& xi);

/// Right action of the convolution algebra on H (x) A: X.a has columns X (e_k * a).
VectorTensor tensor_module_action(const DualAlgebra& dual, const VectorTensor& x, const CVector& a);
/// <X, Y> = sum_{k,l} <X_k, Y_l> e_k^# * e_l.
CVector tensor_module_inner_product(const DualAlgebra& dual, const VectorTensor& x, const VectorTensor& y);

/// Sigma(xi.a) = Sigma(xi)a and <Sigma xi, Sigma eta> = <xi, eta> over a
/// basis, plus hermiticity, module linearity and positivity of the form.
CheckReport verify_sigma(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, const ActionDatum& ad,
                         const Cycle& cycle, double tol);

/// For C = A acting on L^2(phi): the action of the convolution algebra is
/// right convolution and the inner product is xi^# * eta.
CheckReport verify_regular_module(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual, double tol);

/// Graded index of F on H+ (+) H- (H+ first): dim ker F+ - dim coker F+.
long index_even_cycle(Index plus_dim, Index minus_dim, const CMatrix& f);

struct K0Class {
  std::vector<long> v;

  bool operator==(const K0Class& other) const { return v == other.v; }
  K0Class operator+(const K0Class& other) const;
  std::string to_string() const;
};

struct K0Group {
  std::vector<int> dims;
  /// Number of Z summands.
  int rank() const { return static_cast<int>(dims.size()); }
  std::string to_string() const;
};
K0Group k0_of_algebra(const std::vector<int>& dims);

/// Rank of p in each block; throws NotProjection unless p^2 = p = p^*.
K0Class class_of_projection(const AlgebraElement& p, double tol);
/// The same for an element of the convolution algebra, via its matrix units.
K0Class class_of_projection(const DualAlgebra& dual, const CVector& p, double tol);

struct AssemblyResult {
  K0Class route_a;  // graded multiplicities of the isotypic pieces
  K0Class route_b;  // graded module ranks
  CMatrix f_prime;
  std::vector<int> plus;   // route A: dim H_i^+
  std::vector<int> minus;  // route A: dim H_i^-
  CheckReport report;
};

/// mu_0 of an even cycle. Route A averages F, splits H into isotypic pieces
/// and takes the graded index on each multiplicity space. Route B builds the
/// Hilbert module from the inner product and the induced action and reads off
/// projective ranks of its graded parts per central projection. Throws
/// RouteDisagreement if the two integer vectors differ.
AssemblyResult assembly_mu0(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                            const ActionDatum& ad, const Cycle& cycle, double tol);

/// Odd cycles (no grading): the averaged F is formed and checked, and the
/// class lands in K_1 of a finite-dimensional C*-algebra, which is zero.
struct OddAssemblyResult {
  K0Class cls;  // all zero, one entry per dual block
  CMatrix f_prime;
  CheckReport report;
};
OddAssemblyResult assembly_mu1(const QuantumGroup& qg, const HaarData& haar, const DualAlgebra& dual,
                               const ActionDatum& ad, const Cycle& cycle, double tol);

// Cycle builders.

/// [U^(sigma_i) (x) I, C^{d_i}, 0, +1] over the trivial action.
Cycle generator_cycle(const IrrepData& irrep);
/// Isotypic cycle with m_i^+ positive and m_i^- negative copies of sigma_i,
/// conjugated by a random unitary, with a random odd Hermitian F; trivial action.
Cycle random_trivial_cycle(const std::vector<IrrepData>& irreps, const std::vector<int>& plus,
                           const std::vector<int>& minus, std::mt19937_64& rng);
/// L^2(phi) (x) C^{p+q} with the regular representation, pi by left
/// multiplication, gamma = 1 (x) diag(+1^p, -1^q), conjugated by a random
/// unitary, random odd F; for the self action.
Cycle random_regular_cycle(const QuantumGroup& qg, const HaarData& haar, int p, int q, std::mt19937_64& rng,
                           double tol);
/// Regular cycle with F = 0, gamma = 1 over the self action.
Cycle regular_cycle(const QuantumGroup& qg, const HaarData& haar, double tol);

/// Every operator conjugated by w.
Cycle conjugate_cycle(const Cycle& c, const CMatrix& w);
Cycle direct_sum_cycle(const Cycle& a, const Cycle& b);
/// Random Hermitian K with gamma K = -K gamma.
CMatrix random_odd_operator(const CMatrix& gamma, std::mt19937_64& rng);

}  // namespace dqg
