#include "sls/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sls {

namespace {
constexpr Index kInitialCapacity = 8;
}

SupportFactorization::SupportFactorization(const Matrix& columns) : columns_(&columns) {
  basis_.resize(columns.rows(), kInitialCapacity);
  rfactor_.setZero(kInitialCapacity, kInitialCapacity);
}

bool SupportFactorization::contains(Index column) const {
  return std::find(support_.begin(), support_.end(), column) != support_.end();
}

void SupportFactorization::grow_capacity() {
  if (size() < basis_.cols()) return;
  const Index cap = basis_.cols() * 2;
  basis_.conservativeResize(Eigen::NoChange, cap);
  Matrix r = Matrix::Zero(cap, cap);
  r.topLeftCorner(size(), size()) = rfactor_.topLeftCorner(size(), size());
  rfactor_.swap(r);
}

void SupportFactorization::append(Index column) {
  if (column < 0 || column >= columns_->cols())
    throw DimensionMismatch("column index out of range");
  if (contains(column)) throw DimensionMismatch("column already in support");
  grow_capacity();

  const Index n1 = size();
  const auto b = basis_.leftCols(n1);
  const Vector v = columns_->col(column);
  const double original_norm = v.norm();

  // Gram-Schmidt with one reorthogonalization pass.
  Vector h = b.transpose() * v;
  Vector w = v - b * h;
  const Vector h2 = b.transpose() * w;
  w -= b * h2;
  h += h2;

  const double rho = w.norm();
  if (rho < kDegenerateColumnRatio * original_norm) throw DegenerateAtom(column);

  basis_.col(n1) = w / rho;
  rfactor_.col(n1).head(n1) = h;
  rfactor_(n1, n1) = rho;
  support_.push_back(column);
}

Vector SupportFactorization::project_residual(const Vector& v) const {
  if (v.size() != rows()) throw DimensionMismatch("vector length != rows");
  if (size() == 0) return v;
  const auto b = basis();
  return v - b * (b.transpose() * v);
}

Vector SupportFactorization::solve_amplitudes(const Vector& y) const {
  if (y.size() != rows()) throw DimensionMismatch("vector length != rows");
  if (size() == 0) return Vector();
  Vector x = basis().transpose() * y;
  triangular().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

GramCholesky::GramCholesky(const Matrix& design) : design_(&design) {
  lower_.setZero(kInitialCapacity, kInitialCapacity);
}

void GramCholesky::grow_capacity() {
  if (size() < lower_.cols()) return;
  const Index cap = lower_.cols() * 2;
  Matrix l = Matrix::Zero(cap, cap);
  l.topLeftCorner(size(), size()) = lower_.topLeftCorner(size(), size());
  lower_.swap(l);
}

void GramCholesky::insert(Index column) {
  if (column < 0 || column >= design_->cols())
    throw DimensionMismatch("column index out of range");
  grow_capacity();

  const Index s = size();
  const Vector a = design_->col(column);
  Vector g(s);
  for (Index i = 0; i < s; ++i) g(i) = design_->col(active_[i]).dot(a);

  // New factor row [w^T, d] with L w = g and d^2 = a.a - |w|^2.
  lower_.topLeftCorner(s, s).triangularView<Eigen::Lower>().solveInPlace(g);
  const double d2 = a.squaredNorm() - g.squaredNorm();
  if (!(d2 > kCholeskyPivotFloor * kCholeskyPivotFloor)) throw SingularGram(column);

  lower_.row(s).head(s) = g.transpose();
  lower_(s, s) = std::sqrt(d2);
  active_.push_back(column);
}

void GramCholesky::remove(Index position) {
  const Index s = size();
  if (position < 0 || position >= s) throw DimensionMismatch("active position out of range");

  // Drop row `position` of L; rows below shift up and carry one entry to the
  // right of the diagonal, which Givens rotations on column pairs fold back
  // into lower-triangular form.
  for (Index r = position; r + 1 < s; ++r) lower_.row(r).head(s) = lower_.row(r + 1).head(s);
  const Index m = s - 1;  // rows remaining
  for (Index c = position; c < m; ++c) {
    const double x = lower_(c, c);
    const double z = lower_(c, c + 1);
    const double h = std::hypot(x, z);
    if (h == 0.0) continue;
    const double cs = x / h;
    const double sn = z / h;
    for (Index r = c; r < m; ++r) {
      const double lc = lower_(r, c);
      const double lz = lower_(r, c + 1);
      lower_(r, c) = cs * lc + sn * lz;
      lower_(r, c + 1) = -sn * lc + cs * lz;
    }
  }
  lower_.col(m).head(m).setZero();
  lower_.row(m).head(s).setZero();
  active_.erase(active_.begin() + position);
}

Vector GramCholesky::solve(const Vector& rhs) const {
  if (rhs.size() != size()) throw DimensionMismatch("rhs length != active size");
  Vector x = rhs;
  const auto l = lower();
  l.triangularView<Eigen::Lower>().solveInPlace(x);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

Vector least_squares_on_support(const Matrix& columns, const std::vector<Index>& support,
                                const Vector& y) {
  if (support.empty()) return Vector();
  SupportFactorization f(columns);
  for (Index j : support) {
    try {
      f.append(j);
    } catch (const DegenerateAtom&) {
      throw RankDeficient("support column " + std::to_string(j) +
                          " dependent on preceding columns");
    }
  }
  return f.solve_amplitudes(y);
}

}  // namespace sls
