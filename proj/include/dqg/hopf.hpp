#pragma once

// Finite-dimensional discrete quantum groups: a multi-matrix algebra with a
// comultiplication, from which the counit and antipode are solved as linear
// systems and the axioms are checked by residuals.

#include <optional>
#include <string>
#include <vector>

#include "dqg/check.hpp"
#include "dqg/config.hpp"
#include "dqg/multimatrix.hpp"

namespace dqg {

class QuantumGroup {
 public:
  QuantumGroup(std::string name, BlockShape shape, StructureMap delta);

  const std::string& name() const { return name_; }
  const BlockShape& shape() const { return shape_; }
  Index dim() const { return shape_.dim(); }
  const StructureMap& delta() const { return delta_; }
  const std::optional<StructureMap>& epsilon() const { return epsilon_; }
  const std::optional<StructureMap>& antipode() const { return antipode_; }

  /// Candidate counit/antipode, e.g. read from a file. Clears the verified flag.
  void set_epsilon(StructureMap e);
  void set_antipode(StructureMap s);
  void set_name(std::string n) { name_ = std::move(n); }

  /// True only after check_axioms passed on this object.
  bool verified() const { return verified_; }

  /// Dense views; require a solved counit/antipode.
  CVector epsilon_vector() const;
  const CMatrix& antipode_matrix() const;
  const CMatrix& antipode_inverse() const;
  /// Permutation a -> a' with S(e_a) = e_{a'}.
  const std::vector<int>& block_bijection() const { return bijection_; }

 private:
  friend struct AxiomReport check_axioms(QuantumGroup& qg, const Config& cfg);

  std::string name_;
  BlockShape shape_;
  StructureMap delta_;
  std::optional<StructureMap> epsilon_;
  std::optional<StructureMap> antipode_;
  CMatrix antipode_dense_;
  CMatrix antipode_inv_;
  std::vector<int> bijection_;
  bool verified_ = false;
};

/// Throws Unverified unless check_axioms has passed.
void require_verified(const QuantumGroup& qg);

/// Index of e_k e_l in the canonical basis, or -1 when the product is zero.
Index basis_product(const BlockShape& shape, Index k, Index l);

/// Delta(e_k) as a coefficient vector in A (x) A.
CVector delta_of(const QuantumGroup& qg, Index k);

CheckReport check_homomorphism(const QuantumGroup& qg, double tol);
CheckReport check_coassociativity(const QuantumGroup& qg, double tol);

struct T1T2Report {
  CheckReport report;
  Index rank_t1 = 0;
  Index rank_t2 = 0;
  double cond_t1 = 0.0;
  double cond_t2 = 0.0;
};
/// T1(a (x) b) = Delta(a)(1 (x) b), T2(a (x) b) = (a (x) 1)Delta(b) as D^2 x D^2 matrices.
CMatrix t1_matrix(const QuantumGroup& qg);
CMatrix t2_matrix(const QuantumGroup& qg);
T1T2Report check_T1_T2(const QuantumGroup& qg, double tol);

/// The unique functional with (eps (x) id)Delta = id = (id (x) eps)Delta.
StructureMap solve_counit(const QuantumGroup& qg, double tol);
/// Max residual of eps being a *-character.
double counit_character_residual(const BlockShape& shape, const CVector& eps);

/// The unique S with m(S (x) id)Delta = eps(.)1 = m(id (x) S)Delta.
StructureMap solve_antipode(const QuantumGroup& qg, const CVector& eps, double tol);

struct AntipodeResiduals {
  double relation = 0.0;      // both defining relations
  double involution = 0.0;    // S(S(a)^*)^* = a
  double anti_hom = 0.0;      // S(ab) = S(b)S(a)
  double coproduct = 0.0;     // (S (x) S)Delta = flip Delta S
  double counit = 0.0;        // eps S = eps, S(1) = 1
};
AntipodeResiduals antipode_residuals(const QuantumGroup& qg, const CMatrix& s, const CVector& eps);

/// S(e_a) = e_{a'}; throws NotBlockPermutation otherwise.
std::vector<int> antipode_block_bijection(const BlockShape& shape, const CMatrix& s, double tol);

struct AxiomReport {
  CheckReport report;
  T1T2Report t1t2;
  std::vector<int> bijection;
  /// Message of the solver error that stopped the suite, if any.
  std::string detail;
  bool verified() const { return report.pass(); }
};

/// Runs the full axiom suite, fills in the counit and antipode and sets the
/// verified flag when everything passes.
AxiomReport check_axioms(QuantumGroup& qg, const Config& cfg = {});

/// Functional with the given values on the basis, as a map to the scalars.
StructureMap functional_map(const BlockShape& shape, const CVector& values);

}  // namespace dqg
