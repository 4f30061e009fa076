#include "dqg/multimatrix.hpp"

#include <algorithm>
#include <sstream>

#include "dqg/kernel.hpp"

namespace dqg {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_same(const BlockShape& a, const BlockShape& b, const char* what) {
  if (!(a == b)) throw Error(Errc::ShapeMismatch, what);
}

}  // namespace

// --- BlockShape ---------------------------------------------------------------

BlockShape::BlockShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error(Errc::InvalidInput, "block shape needs at least one block");
  offsets_.reserve(dims_.size());
  for (int n : dims_) {
    if (n <= 0) throw Error(Errc::InvalidInput, "block dimensions must be positive");
    offsets_.push_back(dim_);
    dim_ += Index(n) * n;
  }
}

BlockShape::Unit BlockShape::locate(Index k) const {
  if (k < 0 || k >= dim_) throw Error(Errc::ShapeMismatch, "basis index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), k);
  const int a = static_cast<int>(std::distance(offsets_.begin(), it)) - 1;
  const Index local = k - offset(a);
  const int n = block_dim(a);
  return {a, static_cast<int>(local / n), static_cast<int>(local % n)};
}

Index BlockShape::transpose_index(Index k) const {
  const Unit u = locate(k);
  return index(u.block, u.col, u.row);
}

bool BlockShape::is_diagonal(Index k) const {
  const Unit u = locate(k);
  return u.row == u.col;
}

CVector BlockShape::identity() const {
  CVector v = CVector::Zero(dim_);
  for (int a = 0; a < block_count(); ++a)
    for (int i = 0; i < block_dim(a); ++i) v(index(a, i, i)) = 1.0;
  return v;
}

CVector BlockShape::block_identity(int a) const {
  CVector v = CVector::Zero(dim_);
  for (int i = 0; i < block_dim(a); ++i) v(index(a, i, i)) = 1.0;
  return v;
}

CVector BlockShape::unit_vector(Index k) const {
  CVector v = CVector::Zero(dim_);
  v(k) = 1.0;
  return v;
}

std::string BlockShape::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
  os << ']';
  return os.str();
}

// --- AlgebraElement -----------------------------------------------------------

AlgebraElement::AlgebraElement(BlockShape shape) : shape_(std::move(shape)) {
  blocks_.reserve(static_cast<std::size_t>(shape_.block_count()));
  for (int n : shape_.dims()) blocks_.push_back(CMatrix::Zero(n, n));
}

AlgebraElement::AlgebraElement(BlockShape shape, std::vector<CMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != shape_.block_count())
    throw Error(Errc::ShapeMismatch, "block count does not match shape");
  for (int a = 0; a < shape_.block_count(); ++a)
    if (block(a).rows() != shape_.block_dim(a) || block(a).cols() != shape_.block_dim(a))
      throw Error(Errc::ShapeMismatch, "block size does not match shape");
}

AlgebraElement AlgebraElement::from_coefficients(const BlockShape& shape, const CVector& coeffs) {
  if (coeffs.size() != shape.dim()) throw Error(Errc::ShapeMismatch, "coefficient length != dim");
  AlgebraElement x(shape);
  for (int a = 0; a < shape.block_count(); ++a) {
    const int n = shape.block_dim(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x.block(a)(i, j) = coeffs(shape.index(a, i, j));
  }
  return x;
}

AlgebraElement AlgebraElement::identity(const BlockShape& shape) {
  AlgebraElement x(shape);
  for (int a = 0; a < shape.block_count(); ++a) x.block(a).setIdentity();
  return x;
}

AlgebraElement AlgebraElement::block_identity(const BlockShape& shape, int a) {
  AlgebraElement x(shape);
  x.block(a).setIdentity();
  return x;
}

AlgebraElement AlgebraElement::matrix_unit(const BlockShape& shape, int a, int i, int j) {
  AlgebraElement x(shape);
  x.block(a)(i, j) = 1.0;
  return x;
}

CVector AlgebraElement::coefficients() const {
  CVector v(shape_.dim());
  for (int a = 0; a < shape_.block_count(); ++a) {
    const int n = shape_.block_dim(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(shape_.index(a, i, j)) = block(a)(i, j);
  }
  return v;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement x(shape_);
  for (int a = 0; a < shape_.block_count(); ++a) x.block(a) = block(a).adjoint();
  return x;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same(shape_, other.shape_, "operator+=");
  for (int a = 0; a < shape_.block_count(); ++a) block(a) += other.block(a);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same(shape_, other.shape_, "operator-=");
  for (int a = 0; a < shape_.block_count(); ++a) block(a) -= other.block(a);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

AlgebraElement mul(const AlgebraElement& x, const AlgebraElement& y) {
  require_same(x.shape(), y.shape(), "mul: shapes differ");
  AlgebraElement out(x.shape());
  for (int a = 0; a < x.shape().block_count(); ++a) out.block(a).noalias() = x.block(a) * y.block(a);
  return out;
}

double operator_norm(const AlgebraElement& x) {
  double n = 0.0;
  for (const auto& b : x.blocks()) n = std::max(n, operator_norm(CMatrix(b)));
  return n;
}

double max_abs_diff(const AlgebraElement& x, const AlgebraElement& y) {
  require_same(x.shape(), y.shape(), "max_abs_diff: shapes differ");
  double d = 0.0;
  for (int a = 0; a < x.shape().block_count(); ++a)
    d = std::max(d, (x.block(a) - y.block(a)).cwiseAbs().maxCoeff());
  return d;
}

CVector multiply(const BlockShape& shape, const CVector& x, const CVector& y) {
  return mul(AlgebraElement::from_coefficients(shape, x), AlgebraElement::from_coefficients(shape, y))
      .coefficients();
}

CVector star(const BlockShape& shape, const CVector& x) {
  CVector out(shape.dim());
  for (Index k = 0; k < shape.dim(); ++k) out(shape.transpose_index(k)) = std::conj(x(k));
  return out;
}

CMatrix left_multiplication(const BlockShape& shape, const CVector& x) {
  const Index d = shape.dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (int a = 0; a < shape.block_count(); ++a) {
    const int n = shape.block_dim(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m(shape.index(a, i, k), shape.index(a, j, k)) = x(shape.index(a, i, j));
  }
  return m;
}

CMatrix right_multiplication(const BlockShape& shape, const CVector& x) {
  const Index d = shape.dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (int a = 0; a < shape.block_count(); ++a) {
    const int n = shape.block_dim(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m(shape.index(a, i, k), shape.index(a, i, j)) = x(shape.index(a, j, k));
  }
  return m;
}

// --- TensorElement ------------------------------------------------------------

TensorElement::TensorElement(BlockShape left, BlockShape right)
    : left_(std::move(left)), right_(std::move(right)) {
  blocks_.reserve(static_cast<std::size_t>(left_.block_count() * right_.block_count()));
  for (int a = 0; a < left_.block_count(); ++a)
    for (int b = 0; b < right_.block_count(); ++b) {
      const Index n = Index(left_.block_dim(a)) * right_.block_dim(b);
      blocks_.push_back(CMatrix::Zero(n, n));
    }
}

TensorElement TensorElement::from_coefficients(const BlockShape& left, const BlockShape& right,
                                               const CVector& coeffs) {
  const Index dr = right.dim();
  if (coeffs.size() != left.dim() * dr) throw Error(Errc::ShapeMismatch, "tensor coefficient length");
  TensorElement t(left, right);
  for (int a = 0; a < left.block_count(); ++a) {
    const int n = left.block_dim(a);
    for (int b = 0; b < right.block_count(); ++b) {
      const int m = right.block_dim(b);
      CMatrix& blk = t.block(a, b);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
              blk(i * m + p, j * m + q) = coeffs(left.index(a, i, j) * dr + right.index(b, p, q));
    }
  }
  return t;
}

TensorElement TensorElement::identity(const BlockShape& left, const BlockShape& right) {
  TensorElement t(left, right);
  for (auto& b : t.blocks_) b.setIdentity();
  return t;
}

CVector TensorElement::coefficients() const {
  const Index dr = right_.dim();
  CVector v(left_.dim() * dr);
  for (int a = 0; a < left_.block_count(); ++a) {
    const int n = left_.block_dim(a);
    for (int b = 0; b < right_.block_count(); ++b) {
      const int m = right_.block_dim(b);
      const CMatrix& blk = block(a, b);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
              v(left_.index(a, i, j) * dr + right_.index(b, p, q)) = blk(i * m + p, j * m + q);
    }
  }
  return v;
}

TensorElement TensorElement::adjoint() const {
  TensorElement t(left_, right_);
  for (std::size_t s = 0; s < blocks_.size(); ++s) t.blocks_[s] = blocks_[s].adjoint();
  return t;
}

TensorElement mul(const TensorElement& x, const TensorElement& y) {
  require_same(x.left(), y.left(), "tensor mul: left shapes differ");
  require_same(x.right(), y.right(), "tensor mul: right shapes differ");
  TensorElement out(x.left(), x.right());
  for (int a = 0; a < x.left().block_count(); ++a)
    for (int b = 0; b < x.right().block_count(); ++b) out.block(a, b).noalias() = x.block(a, b) * y.block(a, b);
  return out;
}

TensorElement tensor_product(const AlgebraElement& x, const AlgebraElement& y) {
  TensorElement t(x.shape(), y.shape());
  for (int a = 0; a < x.shape().block_count(); ++a)
    for (int b = 0; b < y.shape().block_count(); ++b) t.block(a, b) = kron(x.block(a), y.block(b));
  return t;
}

CVector tensor_multiply(const BlockShape& left, const BlockShape& right, const CVector& x,
                        const CVector& y) {
  return mul(TensorElement::from_coefficients(left, right, x), TensorElement::from_coefficients(left, right, y))
      .coefficients();
}

CVector tensor_star(const BlockShape& left, const BlockShape& right, const CVector& x) {
  const Index dr = right.dim();
  CVector out(x.size());
  for (Index k1 = 0; k1 < left.dim(); ++k1)
    for (Index k2 = 0; k2 < dr; ++k2)
      out(left.transpose_index(k1) * dr + right.transpose_index(k2)) = std::conj(x(k1 * dr + k2));
  return out;
}

// --- Space / StructureMap -----------------------------------------------------

Index Space::dim() const {
  Index d = 1;
  for (const auto& f : factors) d *= f.dim();
  return d;
}

std::string Space::to_string() const {
  if (factors.empty()) return "C";
  std::string s;
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? " (x) " : "") + factors[i].to_string();
  return s;
}

Space operator*(const Space& a, const Space& b) {
  Space s = a;
  s.factors.insert(s.factors.end(), b.factors.begin(), b.factors.end());
  return s;
}

StructureMap::StructureMap(Space source, Space target, Sparse matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
    throw Error(Errc::SpaceMismatch, "structure map size does not match its spaces");
  matrix_.makeCompressed();
}

StructureMap StructureMap::from_dense(Space source, Space target, const CMatrix& m, double drop) {
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop) trips.emplace_back(i, j, m(i, j));
  Sparse s(m.rows(), m.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return StructureMap(std::move(source), std::move(target), std::move(s));
}

StructureMap StructureMap::from_entries(Space source, Space target, const std::vector<Entry>& entries) {
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(entries.size());
  const Index rows = target.dim();
  const Index cols = source.dim();
  for (const auto& e : entries) {
    if (e.target < 0 || e.target >= rows || e.source < 0 || e.source >= cols)
      throw Error(Errc::SpaceMismatch, "structure map entry out of range");
    trips.emplace_back(e.target, e.source, e.value);
  }
  Sparse s(rows, cols);
  s.setFromTriplets(trips.begin(), trips.end());
  return StructureMap(std::move(source), std::move(target), std::move(s));
}

StructureMap StructureMap::identity(const Space& space) {
  Sparse s(space.dim(), space.dim());
  s.setIdentity();
  return StructureMap(space, space, std::move(s));
}

StructureMap StructureMap::zero(Space source, Space target) {
  Sparse s(target.dim(), source.dim());
  return StructureMap(std::move(source), std::move(target), std::move(s));
}

std::vector<StructureMap::Entry> StructureMap::entries() const {
  std::vector<Entry> out;
  for (Index j = 0; j < matrix_.outerSize(); ++j)
    for (Sparse::InnerIterator it(matrix_, j); it; ++it)
      if (it.value() != cplx(0.0)) out.push_back({it.row(), it.col(), it.value()});
  return out;
}

StructureMap StructureMap::adjoint() const {
  Sparse a = matrix_.adjoint();
  return StructureMap(target_, source_, std::move(a));
}

StructureMap compose(const StructureMap& outer, const StructureMap& inner) {
  if (!(outer.source() == inner.target())) throw Error(Errc::SpaceMismatch, "compose: spaces do not chain");
  StructureMap::Sparse m = outer.matrix() * inner.matrix();
  return StructureMap(inner.source(), outer.target(), std::move(m));
}

StructureMap tensor(const StructureMap& a, const StructureMap& b) {
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(ma.nonZeros() * mb.nonZeros()));
  for (Index ja = 0; ja < ma.outerSize(); ++ja)
    for (StructureMap::Sparse::InnerIterator ia(ma, ja); ia; ++ia)
      for (Index jb = 0; jb < mb.outerSize(); ++jb)
        for (StructureMap::Sparse::InnerIterator ib(mb, jb); ib; ++ib)
          trips.emplace_back(ia.row() * mb.rows() + ib.row(), ia.col() * mb.cols() + ib.col(),
                             ia.value() * ib.value());
  StructureMap::Sparse s(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  return StructureMap(a.source() * b.source(), a.target() * b.target(), std::move(s));
}

StructureMap operator+(const StructureMap& a, const StructureMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw Error(Errc::SpaceMismatch, "sum of maps between different spaces");
  StructureMap::Sparse s = a.matrix() + b.matrix();
  return StructureMap(a.source(), a.target(), std::move(s));
}

StructureMap operator-(const StructureMap& a, const StructureMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw Error(Errc::SpaceMismatch, "difference of maps between different spaces");
  StructureMap::Sparse s = a.matrix() - b.matrix();
  return StructureMap(a.source(), a.target(), std::move(s));
}

CVector apply_map(const StructureMap& m, const CVector& x) {
  if (x.size() != m.source().dim()) throw Error(Errc::SpaceMismatch, "apply_map: argument not in source space");
  return m.matrix() * x;
}

CVector apply_map(const StructureMap& m, const AlgebraElement& x) {
  if (!(m.source() == Space::algebra(x.shape())))
    throw Error(Errc::SpaceMismatch, "apply_map: element is not in the source algebra");
  return m.matrix() * x.coefficients();
}

CMatrix map_as_matrix(const StructureMap& m) { return CMatrix(m.matrix()); }

double max_abs_diff(const StructureMap& a, const StructureMap& b) {
  const StructureMap d = a - b;
  double r = 0.0;
  for (Index j = 0; j < d.matrix().outerSize(); ++j)
    for (StructureMap::Sparse::InnerIterator it(d.matrix(), j); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

StructureMap flip_map(const BlockShape& a, const BlockShape& b) {
  std::vector<StructureMap::Entry> entries;
  entries.reserve(static_cast<std::size_t>(a.dim() * b.dim()));
  for (Index ka = 0; ka < a.dim(); ++ka)
    for (Index kb = 0; kb < b.dim(); ++kb) entries.push_back({kb * a.dim() + ka, ka * b.dim() + kb, 1.0});
  return StructureMap::from_entries(Space::tensor(a, b), Space::tensor(b, a), entries);
}

StructureMap multiplication_map(const BlockShape& shape) {
  std::vector<StructureMap::Entry> entries;
  const Index d = shape.dim();
  for (int a = 0; a < shape.block_count(); ++a) {
    const int n = shape.block_dim(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          entries.push_back({shape.index(a, i, l), shape.index(a, i, j) * d + shape.index(a, j, l), 1.0});
  }
  return StructureMap::from_entries(Space::tensor(shape, shape), Space::algebra(shape), entries);
}

// --- OperatorTensor -----------------------------------------------------------

OperatorTensor::OperatorTensor(Index hdim, BlockShape shape) : hdim_(hdim), shape_(std::move(shape)) {
  for (int n : shape_.dims()) blocks_.push_back(CMatrix::Zero(hdim_ * n, hdim_ * n));
}

OperatorTensor::OperatorTensor(Index hdim, BlockShape shape, std::vector<CMatrix> blocks)
    : hdim_(hdim), shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != shape_.block_count())
    throw Error(Errc::ShapeMismatch, "operator tensor block count does not match shape");
  for (int a = 0; a < shape_.block_count(); ++a) {
    const Index n = hdim_ * shape_.block_dim(a);
    if (block(a).rows() != n || block(a).cols() != n)
      throw Error(Errc::ShapeMismatch, "operator tensor block has the wrong size");
  }
}

OperatorTensor OperatorTensor::from_coefficients(Index hdim, const BlockShape& shape,
                                                 const std::vector<CMatrix>& coeffs) {
  if (static_cast<Index>(coeffs.size()) != shape.dim())
    throw Error(Errc::ShapeMismatch, "operator tensor needs one coefficient per basis element");
  OperatorTensor x(hdim, shape);
  for (Index k = 0; k < shape.dim(); ++k) {
    const auto u = shape.locate(k);
    const int n = shape.block_dim(u.block);
    const CMatrix& c = coeffs[static_cast<std::size_t>(k)];
    if (c.rows() != hdim || c.cols() != hdim) throw Error(Errc::ShapeMismatch, "coefficient is not hdim x hdim");
    CMatrix& blk = x.block(u.block);
    for (Index h = 0; h < hdim; ++h)
      for (Index g = 0; g < hdim; ++g) blk(h * n + u.row, g * n + u.col) = c(h, g);
  }
  return x;
}

OperatorTensor OperatorTensor::elementary(const CMatrix& t, const AlgebraElement& a) {
  OperatorTensor x(t.rows(), a.shape());
  for (int b = 0; b < a.shape().block_count(); ++b) x.block(b) = kron(t, a.block(b));
  return x;
}

OperatorTensor OperatorTensor::ampliate(const CMatrix& t, const BlockShape& shape) {
  return elementary(t, AlgebraElement::identity(shape));
}

CMatrix OperatorTensor::coefficient(Index k) const {
  const auto u = shape_.locate(k);
  const int n = shape_.block_dim(u.block);
  const CMatrix& blk = block(u.block);
  CMatrix c(hdim_, hdim_);
  for (Index h = 0; h < hdim_; ++h)
    for (Index g = 0; g < hdim_; ++g) c(h, g) = blk(h * n + u.row, g * n + u.col);
  return c;
}

std::vector<CMatrix> OperatorTensor::coefficients() const {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(shape_.dim()));
  for (Index k = 0; k < shape_.dim(); ++k) out.push_back(coefficient(k));
  return out;
}

OperatorTensor OperatorTensor::adjoint() const {
  OperatorTensor x(hdim_, shape_);
  for (int a = 0; a < shape_.block_count(); ++a) x.block(a) = block(a).adjoint();
  return x;
}

OperatorTensor mul(const OperatorTensor& x, const OperatorTensor& y) {
  if (x.hdim() != y.hdim()) throw Error(Errc::ShapeMismatch, "operator tensors act on different spaces");
  require_same(x.shape(), y.shape(), "operator tensor shapes differ");
  OperatorTensor out(x.hdim(), x.shape());
  for (int a = 0; a < x.shape().block_count(); ++a) out.block(a).noalias() = x.block(a) * y.block(a);
  return out;
}

OperatorTensor operator-(const OperatorTensor& x, const OperatorTensor& y) {
  if (x.hdim() != y.hdim()) throw Error(Errc::ShapeMismatch, "operator tensors act on different spaces");
  require_same(x.shape(), y.shape(), "operator tensor shapes differ");
  OperatorTensor out(x.hdim(), x.shape());
  for (int a = 0; a < x.shape().block_count(); ++a) out.block(a) = x.block(a) - y.block(a);
  return out;
}

double block_norm(const OperatorTensor& x) {
  double n = 0.0;
  for (const auto& b : x.blocks()) n = std::max(n, operator_norm(b));
  return n;
}

}  // namespace dqg
