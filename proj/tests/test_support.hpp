// Shared test fixtures and independent oracles.  Everything here crosschecks
// the library through routes it does not use itself: dense SVD/QR solves,
// soft-thresholding closed forms, and a fixed-penalty coordinate-descent
// solver driven to a small duality gap.
#ifndef SLS_TEST_SUPPORT_HPP
#define SLS_TEST_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "sls/homotopy.hpp"
#include "sls/types.hpp"

namespace test {

using sls::Index;
using sls::Matrix;
using sls::Vector;

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  return m;
}

inline Vector random_vector(Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Matrix with_unit_columns(Matrix m) {
  for (Index j = 0; j < m.cols(); ++j) m.col(j) /= m.col(j).norm();
  return m;
}

/// Random square orthonormal matrix (Q factor of a random matrix).
inline Matrix random_orthonormal(Index n, std::mt19937_64& rng) {
  const Matrix m = random_matrix(n, n, rng);
  return Eigen::HouseholderQR<Matrix>(m).householderQ();
}

/// Dense Moore-Penrose pseudo-inverse via SVD.
inline Matrix pseudo_inverse(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cutoff = 1e-13 * svd.singularValues()(0);
  Vector inv = svd.singularValues();
  for (Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > cutoff ? 1.0 / inv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Largest KKT violation of a path state; all three conditions at once.
struct KktViolation {
  double stationarity = 0.0;  // active:   |a_j.r - lambda*sign_j|
  double feasibility = 0.0;   // inactive: max(|a_j.r| - lambda, 0)
  bool signs_consistent = true;
};

inline KktViolation kkt_violation(const Matrix& a, const Vector& y, const sls::LassoPath& path) {
  KktViolation v;
  Vector r = y;
  for (Index i = 0; i < path.active_size(); ++i)
    r -= path.coefficients()(i) * a.col(path.active()[i]);
  std::vector<char> is_active(a.cols(), 0);
  for (Index i = 0; i < path.active_size(); ++i) {
    const Index j = path.active()[i];
    is_active[j] = 1;
    const double corr = a.col(j).dot(r);
    v.stationarity =
        std::max(v.stationarity, std::abs(corr - path.lambda() * path.signs()[i]));
    if (std::abs(path.coefficients()(i)) > 1e-12 &&
        sls::sign_of(path.coefficients()(i)) != path.signs()[i])
      v.signs_consistent = false;
  }
  for (Index j = 0; j < a.cols(); ++j) {
    if (is_active[j]) continue;
    v.feasibility =
        std::max(v.feasibility, std::abs(a.col(j).dot(r)) - path.lambda());
  }
  v.feasibility = std::max(v.feasibility, 0.0);
  return v;
}

/// Soft-thresholding closed form for orthonormal designs.
inline Vector soft_threshold_solution(const Matrix& a, const Vector& y, double lambda) {
  const Vector c = a.transpose() * y;
  Vector x(c.size());
  for (Index j = 0; j < c.size(); ++j)
    x(j) = sls::sign_of(c(j)) * std::max(std::abs(c(j)) - lambda, 0.0);
  return x;
}

inline double lasso_objective(const Matrix& a, const Vector& y, double lambda, const Vector& x) {
  return 0.5 * (y - a * x).squaredNorm() + lambda * x.template lpNorm<1>();
}

inline double lasso_duality_gap(const Matrix& a, const Vector& y, double lambda,
                                const Vector& x) {
  const Vector r = y - a * x;
  const double corr_max = (a.transpose() * r).cwiseAbs().maxCoeff();
  const double scale = corr_max > lambda ? lambda / corr_max : 1.0;
  const Vector nu = scale * r;
  const double primal = 0.5 * r.squaredNorm() + lambda * x.template lpNorm<1>();
  const double dual = nu.dot(y) - 0.5 * nu.squaredNorm();
  return primal - dual;
}

/// Fixed-penalty coordinate descent, run until the duality gap certificate
/// drops below gap_tol.
inline Vector lasso_coordinate_descent(const Matrix& a, const Vector& y, double lambda,
                                       double gap_tol = 1e-10, long max_sweeps = 500000) {
  const Index n = a.cols();
  Vector col_sq(n);
  for (Index j = 0; j < n; ++j) col_sq(j) = a.col(j).squaredNorm();
  Vector x = Vector::Zero(n);
  Vector r = y;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Index j = 0; j < n; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double z = a.col(j).dot(r) + col_sq(j) * x(j);
      const double next = sls::sign_of(z) * std::max(std::abs(z) - lambda, 0.0) / col_sq(j);
      if (next != x(j)) {
        r += a.col(j) * (x(j) - next);
        x(j) = next;
      }
    }
    r = y - a * x;  // fresh residual kills incremental drift
    if (lasso_duality_gap(a, y, lambda, x) <= gap_tol) return x;
  }
  return x;
}

}  // namespace test

#endif
