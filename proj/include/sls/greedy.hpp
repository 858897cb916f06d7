#ifndef SLS_GREEDY_HPP
#define SLS_GREEDY_HPP

#include <vector>

#include "sls/dictionary.hpp"
#include "sls/homotopy.hpp"
#include "sls/linalg.hpp"
#include "sls/types.hpp"

namespace sls {

/// Ordered set of selected atom indices.
struct SupportSet {
  std::vector<Index> selected;  // in selection order, no duplicates
  Index universe = 0;

  Index size() const { return static_cast<Index>(selected.size()); }
  bool contains(Index j) const;
  /// Set equality, ignoring selection order.
  bool same_atoms(const SupportSet& other) const;
};

enum class SelectionRule { omp, ols, sls };

struct GreedyConfig {
  SelectionRule rule = SelectionRule::omp;
  Index sparsity = 0;
  int sls_multiplier = 3;
  Index homotopy_step_budget = 0;  // 0 keeps the solver default
  bool record_score_vectors = false;
  bool record_path_events = false;
};

/// Remaining atoms and observation projected onto the orthogonal complement
/// of the selected span.  Columns whose projection falls below the
/// degeneracy cutoff are pruned (listed by original index); index_map sends
/// kept-column positions back to original atom indices.
struct ProjectedProblem {
  Vector target;
  Matrix atoms;
  std::vector<Index> index_map;
  std::vector<Index> pruned;
  Index support_size = 0;
  Index universe = 0;
};

struct IterationTrace {
  Index selected = -1;
  double score = 0.0;
  double seconds = 0.0;
  Vector scores;                       // full score vector when recorded
  std::vector<PathEvent> path_events;  // homotopy events when recorded
};

struct GreedyResult {
  SupportSet support;
  Vector amplitudes;  // least squares on the final support, selection order
  Vector residual;    // y - A_support * amplitudes
  std::vector<IterationTrace> trace;
  bool early_termination = false;
};

/// |a_j . r| for every remaining atom; selected atoms score -inf.
Vector score_omp(const Dictionary& d, const SupportSet& support, const Vector& residual);

/// Squared norm of the projection of y onto span(support + {j}) for every
/// remaining atom j; atoms inside the selected span score -inf.
Vector score_ols(const Dictionary& d, const SupportFactorization& f, const Vector& y);

ProjectedProblem build_projected_problem(const Dictionary& d, const SupportFactorization& f,
                                         const Vector& y);

/// Solves the l1-penalized subproblem over the projected atoms up to
/// min(sls_multiplier * remaining_budget, usable columns, rows - support)
/// active components and scores each remaining atom by its solution
/// amplitude (0 when inactive, -inf when pruned).  Throws EmptySolution when
/// the projected target is orthogonal to every remaining atom.
Vector score_sls(const ProjectedProblem& pp, Index remaining_budget, const GreedyConfig& cfg,
                 std::vector<PathEvent>* events = nullptr);

/// Forward selection: scores remaining atoms with the configured rule,
/// selects the argmax (smallest index on ties, degenerate picks skipped to
/// the next-best score), and re-estimates amplitudes by least squares on the
/// grown support.  Stops at `sparsity` atoms, or earlier when no atom can
/// reduce the residual (flagged, never an error).
GreedyResult run_forward_selection(const Dictionary& d, const Vector& y,
                                   const GreedyConfig& cfg);

}  // namespace sls

#endif
