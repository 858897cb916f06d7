#ifndef SLS_HOMOTOPY_HPP
#define SLS_HOMOTOPY_HPP

#include <utility>
#include <vector>

#include "sls/linalg.hpp"
#include "sls/types.hpp"

namespace sls {

/// One l1-penalized least-squares instance: min 1/2 |target - design x|^2
/// + lambda |x|_1.  Columns need not have unit norm, but all-zero columns
/// must be pruned by the caller before solving.  Non-owning: the referenced
/// matrix and vector must outlive every solve.
struct LassoProblem {
  LassoProblem(const Matrix& a, const Vector& y) : design_(&a), target_(&y) {}

  const Matrix& design() const { return *design_; }
  const Vector& target() const { return *target_; }

 private:
  const Matrix* design_;
  const Vector* target_;
};

/// Smallest penalty with an identically zero solution, and its argmax column
/// (smallest index on ties): max_j |a_j . target|.
std::pair<double, Index> lambda_max(const LassoProblem& p);

enum class PathEventKind { insert, remove };

struct PathEvent {
  double lambda;
  PathEventKind kind;
  Index column;
};

/// Piecewise-linear solution path of a LassoProblem for decreasing lambda.
/// The state always sits on the path: active set, signs, and coefficients
/// satisfy the KKT conditions at the current lambda.  step() advances to the
/// next breakpoint, applying exactly one insertion or sign-change deletion.
/// Columns whose insertion would make the active Gram matrix singular are
/// excluded permanently and the step retried.
///
/// Single-writer mutable; distinct paths over the same problem may run in
/// parallel.
class LassoPath {
 public:
  explicit LassoPath(const LassoProblem& p);

  double lambda() const { return lambda_; }
  double lambda_max_value() const { return lambda_max_; }
  Index active_size() const { return static_cast<Index>(active_.size()); }
  const std::vector<Index>& active() const { return active_; }
  const std::vector<double>& signs() const { return signs_; }
  /// Coefficients aligned with active().
  const Vector& coefficients() const { return coef_; }
  /// Coefficients scattered to a full design-width vector.
  Vector dense_solution() const;
  const std::vector<PathEvent>& events() const { return events_; }
  const std::vector<Index>& excluded() const { return excluded_; }
  Index steps_taken() const { return steps_; }
  bool budget_exceeded() const { return budget_exceeded_; }
  void mark_budget_exceeded() { budget_exceeded_ = true; }

  /// Advances to the next breakpoint in (0, lambda] and applies its event.
  /// Returns false (state unchanged) when no further event exists; the
  /// current segment then runs to the least-squares end at lambda = 0.
  bool step();

  /// Like step(), but when the next event lies at or below `floor` no event
  /// is applied and the state descends along the segment to `floor`
  /// (returning false).
  bool step_above(double floor);

  /// Lambda of the next event without applying it, 0 when none exists.
  double peek_next_lambda() const;

  /// Moves along the current segment to `lam`; callers guarantee via step()
  /// or peek_next_lambda() that no event lies strictly inside (lam, lambda).
  void descend_to(double lam);

  /// Places an all-zero state at a penalty at or above lambda_max.
  void start_at(double lam);

 private:
  struct Candidate {
    bool exists = false;
    double lambda = 0.0;
    PathEventKind kind = PathEventKind::insert;
    Index column = -1;    // design column
    Index position = -1;  // active position (deletions)
    double sign = 0.0;    // entering sign (insertions)
  };

  LassoProblem problem_;
  double lambda_ = 0.0;
  double lambda_max_ = 0.0;
  double tie_tol_ = 0.0;
  std::vector<Index> active_;
  std::vector<double> signs_;
  Vector coef_;
  GramCholesky gram_;
  std::vector<char> in_active_;
  std::vector<char> excluded_mask_;
  std::vector<Index> excluded_;
  std::vector<PathEvent> events_;
  Index steps_ = 0;
  bool budget_exceeded_ = false;
  Index last_removed_ = -1;      // column removed by the latest deletion
  double last_removed_at_ = -1;  // lambda of that deletion

  // Current-segment cache: x(lambda) = ls_coef_ - lambda * direction_.
  Vector ls_coef_;
  Vector direction_;
  Vector ls_residual_;       // target - A_S ls_coef_
  Vector direction_image_;   // A_S direction_

  void refresh_segment();
  Candidate find_next_event() const;
  bool advance(double floor, bool descend_on_exhaust);
  void apply_insert(const Candidate& c);
  void apply_remove(const Candidate& c);
};

/// Runs the path from lambda_max until the active set first reaches
/// min(target, usable columns), then moves along the final segment to the
/// next breakpoint (or to lambda = 0 when none remains) so every targeted
/// coefficient is settled.  Ends early at the least-squares end of the path,
/// or after max_steps events with the state flagged budget_exceeded.
/// max_steps = 0 means 10 * target.
LassoPath solve_until_support_size(const LassoProblem& p, Index target, Index max_steps = 0);

/// Runs the path until the penalty reaches `lam` and evaluates the solution
/// there.  max_steps = 0 means 10 * design columns.
LassoPath solve_for_lambda(const LassoProblem& p, double lam, Index max_steps = 0);

}  // namespace sls

#endif
