#include "sls/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "sls/errors.hpp"

namespace sls {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_config(const Dictionary& d, const Vector& y, const GreedyConfig& cfg) {
  if (!d.normalized) throw NotNormalized("forward selection requires a normalized dictionary");
  if (y.size() != d.n_obs()) throw DimensionMismatch("observation length != dictionary rows");
  if (cfg.sparsity < 0 || cfg.sparsity > std::min(d.n_obs(), d.n_atoms()))
    throw std::invalid_argument("sparsity must lie in [0, min(n_obs, n_atoms)]");
  if (cfg.sls_multiplier < 1) throw std::invalid_argument("sls multiplier must be >= 1");
}

}  // namespace

bool SupportSet::contains(Index j) const {
  return std::find(selected.begin(), selected.end(), j) != selected.end();
}

bool SupportSet::same_atoms(const SupportSet& other) const {
  if (selected.size() != other.selected.size()) return false;
  std::vector<Index> a = selected, b = other.selected;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Vector score_omp(const Dictionary& d, const SupportSet& support, const Vector& residual) {
  if (residual.size() != d.n_obs()) throw DimensionMismatch("residual length != dictionary rows");
  Vector scores = (d.atoms.transpose() * residual).cwiseAbs();
  for (Index j : support.selected) scores(j) = kNegInf;
  return scores;
}

Vector score_ols(const Dictionary& d, const SupportFactorization& f, const Vector& y) {
  if (y.size() != d.n_obs()) throw DimensionMismatch("observation length != dictionary rows");
  const Index m = d.n_atoms();
  const Index n1 = f.size();
  Vector scores(m);

  const auto b = f.basis();
  const Vector by = b.transpose() * y;
  const double base = by.squaredNorm();
  const Vector projected_y = y - b * by;
  const Vector corr = d.atoms.transpose() * projected_y;
  const Matrix bta = b.transpose() * d.atoms;  // n1 x m

  for (Index j = 0; j < m; ++j) {
    if (f.contains(j)) {
      scores(j) = kNegInf;
      continue;
    }
    const double col_sq = d.atoms.col(j).squaredNorm();
    double proj_sq = col_sq - (n1 > 0 ? bta.col(j).squaredNorm() : 0.0);
    if (proj_sq <= 1e-12 * col_sq) {
      // Difference form cannot resolve norms this small; project explicitly.
      proj_sq = f.project_residual(d.atoms.col(j)).squaredNorm();
      if (proj_sq < kDegenerateColumnRatio * kDegenerateColumnRatio * col_sq) {
        scores(j) = kNegInf;
        continue;
      }
    }
    const double gain = corr(j) * corr(j) / proj_sq;
    scores(j) = base + gain;
  }
  return scores;
}

ProjectedProblem build_projected_problem(const Dictionary& d, const SupportFactorization& f,
                                         const Vector& y) {
  if (y.size() != d.n_obs()) throw DimensionMismatch("observation length != dictionary rows");
  ProjectedProblem pp;
  pp.support_size = f.size();
  pp.universe = d.n_atoms();
  pp.target = f.project_residual(y);

  std::vector<Index> remaining;
  remaining.reserve(d.n_atoms() - f.size());
  for (Index j = 0; j < d.n_atoms(); ++j)
    if (!f.contains(j)) remaining.push_back(j);

  const Index nr = static_cast<Index>(remaining.size());
  Matrix projected(d.n_obs(), nr);
  for (Index r = 0; r < nr; ++r) projected.col(r) = d.atoms.col(remaining[r]);
  if (f.size() > 0) {
    const auto b = f.basis();
    projected -= b * (b.transpose() * projected).eval();
  }

  std::vector<Index> kept;
  kept.reserve(nr);
  for (Index r = 0; r < nr; ++r) {
    const double original = d.atoms.col(remaining[r]).norm();
    if (projected.col(r).norm() < kDegenerateColumnRatio * original)
      pp.pruned.push_back(remaining[r]);
    else
      kept.push_back(r);
  }
  pp.atoms.resize(d.n_obs(), static_cast<Index>(kept.size()));
  pp.index_map.reserve(kept.size());
  for (Index c = 0; c < static_cast<Index>(kept.size()); ++c) {
    pp.atoms.col(c) = projected.col(kept[c]);
    pp.index_map.push_back(remaining[kept[c]]);
  }
  return pp;
}

Vector score_sls(const ProjectedProblem& pp, Index remaining_budget, const GreedyConfig& cfg,
                 std::vector<PathEvent>* events) {
  if (remaining_budget < 1) throw std::invalid_argument("remaining budget must be >= 1");
  if (pp.atoms.cols() == 0)
    throw EmptySolution("no usable atoms outside the selected span");

  const LassoProblem problem(pp.atoms, pp.target);
  if (lambda_max(problem).first == 0.0)
    throw EmptySolution("projected target orthogonal to all remaining atoms");

  const Index target =
      std::min({static_cast<Index>(cfg.sls_multiplier) * remaining_budget, pp.atoms.cols(),
                pp.atoms.rows() - pp.support_size});
  const LassoPath path = solve_until_support_size(problem, target, cfg.homotopy_step_budget);
  if (events) *events = path.events();

  Vector scores = Vector::Constant(pp.universe, kNegInf);
  for (Index j : pp.index_map) scores(j) = 0.0;
  for (Index i = 0; i < path.active_size(); ++i)
    scores(pp.index_map[path.active()[i]]) = std::abs(path.coefficients()(i));
  return scores;
}

GreedyResult run_forward_selection(const Dictionary& d, const Vector& y,
                                   const GreedyConfig& cfg) {
  check_config(d, y, cfg);

  GreedyResult result;
  result.support.universe = d.n_atoms();
  result.residual = y;

  SupportFactorization factorization(d.atoms);
  std::vector<char> unusable(d.n_atoms(), 0);

  while (result.support.size() < cfg.sparsity) {
    const auto t0 = std::chrono::steady_clock::now();
    IterationTrace record;

    Vector scores;
    double termination_floor = 0.0;  // best score must exceed this to be useful
    try {
      switch (cfg.rule) {
        case SelectionRule::omp:
          scores = score_omp(d, result.support, result.residual);
          break;
        case SelectionRule::ols: {
          scores = score_ols(d, factorization, y);
          const Vector by = factorization.basis().transpose() * y;
          termination_floor = by.squaredNorm();
          break;
        }
        case SelectionRule::sls: {
          const ProjectedProblem pp = build_projected_problem(d, factorization, y);
          const Index budget = cfg.sparsity - result.support.size();
          scores = score_sls(pp, budget, cfg,
                             cfg.record_path_events ? &record.path_events : nullptr);
          break;
        }
      }
    } catch (const EmptySolution&) {
      result.early_termination = true;
      break;
    }
    for (Index j = 0; j < d.n_atoms(); ++j)
      if (unusable[j]) scores(j) = kNegInf;

    // All remaining scores at or below the floor mean no atom can improve
    // the model: stop early rather than pad the support.
    const double best = scores.maxCoeff();
    if (!(best > termination_floor)) {
      result.early_termination = true;
      break;
    }

    // Argmax with smallest index on ties; degenerate picks are skipped to
    // the next-best score.
    Index chosen = -1;
    while (true) {
      Index arg = -1;
      double top = kNegInf;
      for (Index j = 0; j < d.n_atoms(); ++j) {
        if (scores(j) > top) {
          top = scores(j);
          arg = j;
        }
      }
      if (arg < 0 || !(top > termination_floor)) break;
      try {
        factorization.append(arg);
        chosen = arg;
        record.score = top;
        break;
      } catch (const DegenerateAtom&) {
        unusable[arg] = 1;
        scores(arg) = kNegInf;
      }
    }
    if (chosen < 0) {
      result.early_termination = true;
      break;
    }

    result.support.selected.push_back(chosen);
    result.amplitudes = factorization.solve_amplitudes(y);
    result.residual = y;
    for (Index i = 0; i < result.support.size(); ++i)
      result.residual -= result.amplitudes(i) * d.atoms.col(result.support.selected[i]);

    record.selected = chosen;
    record.seconds = seconds_since(t0);
    if (cfg.record_score_vectors) record.scores = scores;
    result.trace.push_back(std::move(record));
  }

  return result;
}

}  // namespace sls
