#ifndef SLS_LINALG_HPP
#define SLS_LINALG_HPP

#include <vector>

#include "sls/errors.hpp"
#include "sls/types.hpp"

namespace sls {

/// Incremental orthogonal factorization of a growing set of columns picked
/// from a fixed dense matrix.  Maintains an orthonormal basis B of the span
/// of the selected columns and the upper-triangular factor R with
/// A[:, support] = B * R.  Appending one column costs O(rows * size()).
///
/// Single-writer mutable; the referenced matrix must outlive the
/// factorization and must not change.
class SupportFactorization {
 public:
  explicit SupportFactorization(const Matrix& columns);

  Index rows() const { return columns_->rows(); }
  Index size() const { return static_cast<Index>(support_.size()); }
  const std::vector<Index>& support() const { return support_; }
  bool contains(Index column) const;

  /// Orthonormal basis of the selected span, rows x size().
  Eigen::Block<const Matrix> basis() const { return basis_.topLeftCorner(rows(), size()); }
  /// Upper-triangular factor, size() x size().
  Eigen::Block<const Matrix> triangular() const { return rfactor_.topLeftCorner(size(), size()); }

  /// Appends one column.  Throws DegenerateAtom when the column lies in the
  /// span of the current support (projected norm below the relative cutoff).
  void append(Index column);

  /// Applies the orthogonal projector onto the complement of the selected
  /// span: v - B (B^T v).  Throws DimensionMismatch on wrong length.
  Vector project_residual(const Vector& v) const;

  /// Least-squares coefficients of y on the selected columns, in selection
  /// order: R^{-1} (B^T y).
  Vector solve_amplitudes(const Vector& y) const;

 private:
  const Matrix* columns_;
  Matrix basis_;    // preallocated rows x capacity, first size() columns valid
  Matrix rfactor_;  // preallocated capacity x capacity, top-left block valid
  std::vector<Index> support_;

  void grow_capacity();
};

/// Cholesky factor of the Gram matrix of an active subset of columns of a
/// fixed design matrix, maintained under insertion and deletion in O(|S|^2).
class GramCholesky {
 public:
  explicit GramCholesky(const Matrix& design);

  Index size() const { return static_cast<Index>(active_.size()); }
  const std::vector<Index>& active() const { return active_; }
  /// Lower-triangular factor L with L L^T = design[:, active]^T design[:, active].
  Eigen::Block<const Matrix> lower() const { return lower_.topLeftCorner(size(), size()); }

  /// Appends one design column to the active set.  Throws SingularGram when
  /// the extended Gram matrix is not positive definite within the pivot floor.
  void insert(Index column);

  /// Removes the active entry at the given position (0-based within the
  /// active list); remaining entries keep their relative order.
  void remove(Index position);

  /// Solves (A_S^T A_S) x = rhs.  Throws DimensionMismatch on wrong length.
  Vector solve(const Vector& rhs) const;

 private:
  const Matrix* design_;
  Matrix lower_;
  std::vector<Index> active_;

  void grow_capacity();
};

/// Least-squares coefficients of y on the given support columns, in support
/// order.  Empty support yields an empty vector.  Throws RankDeficient when
/// the support columns are linearly dependent within the degeneracy cutoff.
Vector least_squares_on_support(const Matrix& columns, const std::vector<Index>& support,
                                const Vector& y);

}  // namespace sls

#endif
