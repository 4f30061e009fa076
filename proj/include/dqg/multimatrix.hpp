#pragma once

// Multi-matrix *-algebras A = (+)_a M_{n_a}, their tensor products, bounded
// operators B(H) (x) A, and sparse linear structure maps between tensor powers.
//
// Canonical basis order: blocks ascending, and within a block the matrix units
// e^a_{ij} in row-major order. Tensor products use the lexicographic order of
// the factors (first factor major), so the coefficient vector of x (x) y is the
// Kronecker product of the coefficient vectors.

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "dqg/config.hpp"
#include "dqg/error.hpp"

namespace dqg {

class BlockShape {
 public:
  struct Unit {
    int block;
    int row;
    int col;
  };

  BlockShape() = default;
  explicit BlockShape(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int block_count() const { return static_cast<int>(dims_.size()); }
  int block_dim(int a) const { return dims_[static_cast<std::size_t>(a)]; }
  Index dim() const { return dim_; }
  Index offset(int a) const { return offsets_[static_cast<std::size_t>(a)]; }

  Index index(int a, int i, int j) const { return offset(a) + Index(i) * block_dim(a) + j; }
  Unit locate(Index k) const;
  /// e_k^* = e_{transpose_index(k)}.
  Index transpose_index(Index k) const;
  bool is_diagonal(Index k) const;

  /// Coefficients of the unit 1 = sum_a e_a.
  CVector identity() const;
  /// Coefficients of the central projection e_a.
  CVector block_identity(int a) const;
  CVector unit_vector(Index k) const;

  std::string to_string() const;

  bool operator==(const BlockShape& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<Index> offsets_;
  Index dim_ = 0;
};

class AlgebraElement {
 public:
  explicit AlgebraElement(BlockShape shape);
  AlgebraElement(BlockShape shape, std::vector<CMatrix> blocks);

  static AlgebraElement from_coefficients(const BlockShape& shape, const CVector& coeffs);
  static AlgebraElement identity(const BlockShape& shape);
  static AlgebraElement block_identity(const BlockShape& shape, int a);
  static AlgebraElement matrix_unit(const BlockShape& shape, int a, int i, int j);

  const BlockShape& shape() const { return shape_; }
  const CMatrix& block(int a) const { return blocks_[static_cast<std::size_t>(a)]; }
  CMatrix& block(int a) { return blocks_[static_cast<std::size_t>(a)]; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  CVector coefficients() const;
  AlgebraElement adjoint() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(cplx s);

 private:
  BlockShape shape_;
  std::vector<CMatrix> blocks_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, AlgebraElement a);

/// Blockwise product.
AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y);
inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) { return mul(x, y); }

/// sup over blocks of the largest singular value.
double operator_norm(const AlgebraElement& x);

/// Largest entry of x - y in absolute value (blockwise).
double max_abs_diff(const AlgebraElement& x, const AlgebraElement& y);

// Coefficient-vector forms of the algebra operations.
CVector multiply(const BlockShape& shape, const CVector& x, const CVector& y);
CVector star(const BlockShape& shape, const CVector& x);
/// Matrix of b -> x b.
CMatrix left_multiplication(const BlockShape& shape, const CVector& x);
/// Matrix of b -> b x.
CMatrix right_multiplication(const BlockShape& shape, const CVector& x);

/// Element of A (x) B stored blockwise: block (a, b) acts on C^{n_a} (x) C^{m_b}.
class TensorElement {
 public:
  TensorElement(BlockShape left, BlockShape right);

  static TensorElement from_coefficients(const BlockShape& left, const BlockShape& right,
                                         const CVector& coeffs);
  static TensorElement identity(const BlockShape& left, const BlockShape& right);

  const BlockShape& left() const { return left_; }
  const BlockShape& right() const { return right_; }
  const CMatrix& block(int a, int b) const { return blocks_[slot(a, b)]; }
  CMatrix& block(int a, int b) { return blocks_[slot(a, b)]; }

  CVector coefficients() const;
  TensorElement adjoint() const;

 private:
  std::size_t slot(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(right_.block_count()) +
           static_cast<std::size_t>(b);
  }
  BlockShape left_;
  BlockShape right_;
  std::vector<CMatrix> blocks_;
};

TensorElement mul(const TensorElement& x, const TensorElement& y);
TensorElement tensor_product(const AlgebraElement& x, const AlgebraElement& y);

/// Product in A (x) B on coefficient vectors.
CVector tensor_multiply(const BlockShape& left, const BlockShape& right, const CVector& x,
                        const CVector& y);
/// Star in A (x) B on coefficient vectors.
CVector tensor_star(const BlockShape& left, const BlockShape& right, const CVector& x);

/// A tensor product of multi-matrix algebras; no factors means the scalars.
struct Space {
  std::vector<BlockShape> factors;

  static Space scalars() { return {}; }
  static Space algebra(const BlockShape& s) { return Space{{s}}; }
  static Space tensor(const BlockShape& a, const BlockShape& b) { return Space{{a, b}}; }

  Index dim() const;
  std::string to_string() const;
  bool operator==(const Space& other) const { return factors == other.factors; }
};

Space operator*(const Space& a, const Space& b);

/// A linear map between spaces, stored as a sparse matrix in the canonical bases.
class StructureMap {
 public:
  using Sparse = Eigen::SparseMatrix<cplx>;

  struct Entry {
    Index target;
    Index source;
    cplx value;
  };

  StructureMap(Space source, Space target, Sparse matrix);

  static StructureMap from_dense(Space source, Space target, const CMatrix& m, double drop = 0.0);
  static StructureMap from_entries(Space source, Space target, const std::vector<Entry>& entries);
  static StructureMap identity(const Space& space);
  static StructureMap zero(Space source, Space target);

  const Space& source() const { return source_; }
  const Space& target() const { return target_; }
  const Sparse& matrix() const { return matrix_; }

  /// Nonzero coefficients sorted by (source, target).
  std::vector<Entry> entries() const;
  /// Adjoint with respect to the Hilbert-Schmidt pairing (matrix units are orthonormal).
  StructureMap adjoint() const;

 private:
  Space source_;
  Space target_;
  Sparse matrix_;
};

/// outer o inner.
StructureMap compose(const StructureMap& outer, const StructureMap& inner);
/// a (x) b acting on the tensor product of the sources.
StructureMap tensor(const StructureMap& a, const StructureMap& b);
StructureMap operator+(const StructureMap& a, const StructureMap& b);
StructureMap operator-(const StructureMap& a, const StructureMap& b);

CVector apply_map(const StructureMap& m, const CVector& x);
CVector apply_map(const StructureMap& m, const AlgebraElement& x);
CMatrix map_as_matrix(const StructureMap& m);
/// Largest coefficient of a - b.
double max_abs_diff(const StructureMap& a, const StructureMap& b);

/// x (x) y -> y (x) x.
StructureMap flip_map(const BlockShape& a, const BlockShape& b);
/// x (x) y -> x y.
StructureMap multiplication_map(const BlockShape& shape);

/// Element of B(H) (x) A, stored blockwise: block a acts on H (x) C^{n_a} with
/// H as the major index.
class OperatorTensor {
 public:
  OperatorTensor(Index hdim, BlockShape shape);
  OperatorTensor(Index hdim, BlockShape shape, std::vector<CMatrix> blocks);

  static OperatorTensor from_coefficients(Index hdim, const BlockShape& shape,
                                          const std::vector<CMatrix>& coeffs);
  /// T (x) a.
  static OperatorTensor elementary(const CMatrix& t, const AlgebraElement& a);
  /// T (x) 1.
  static OperatorTensor ampliate(const CMatrix& t, const BlockShape& shape);

  Index hdim() const { return hdim_; }
  const BlockShape& shape() const { return shape_; }
  const CMatrix& block(int a) const { return blocks_[static_cast<std::size_t>(a)]; }
  CMatrix& block(int a) { return blocks_[static_cast<std::size_t>(a)]; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  /// The operator X_k with X = sum_k X_k (x) e_k.
  CMatrix coefficient(Index k) const;
  std::vector<CMatrix> coefficients() const;

  OperatorTensor adjoint() const;

 private:
  Index hdim_;
  BlockShape shape_;
  std::vector<CMatrix> blocks_;
};

OperatorTensor mul(const OperatorTensor& x, const OperatorTensor& y);
inline OperatorTensor operator*(const OperatorTensor& x, const OperatorTensor& y) { return mul(x, y); }
OperatorTensor operator-(const OperatorTensor& x, const OperatorTensor& y);
/// Largest spectral norm over blocks.
double block_norm(const OperatorTensor& x);

/// Element of H (x) A as an hdim x D matrix; column k is the H-component paired with e_k.
using VectorTensor = CMatrix;

}  // namespace dqg
