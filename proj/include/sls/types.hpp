#ifndef SLS_TYPES_HPP
#define SLS_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace sls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Scale-relative degeneracy cutoffs shared by the solvers.
// A column counts as degenerate when its projected norm drops below
// kDegenerateColumnRatio times its original norm; a Cholesky update fails
// when a diagonal pivot falls below kCholeskyPivotFloor.
inline constexpr double kDegenerateColumnRatio = 1e-10;
inline constexpr double kCholeskyPivotFloor = 1e-12;

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace sls

#endif
