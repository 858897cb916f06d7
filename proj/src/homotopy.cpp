#include "sls/homotopy.hpp"

#include <cmath>
#include <stdexcept>

#include "sls/errors.hpp"

namespace sls {

namespace {

void validate(const LassoProblem& p) {
  if (p.target().size() != p.design().rows())
    throw DimensionMismatch("target length != design rows");
  for (Index j = 0; j < p.design().cols(); ++j) {
    if (p.design().col(j).norm() < 1e-300)
      throw DimensionMismatch("all-zero design column " + std::to_string(j) +
                              " must be pruned before solving");
  }
}

}  // namespace

std::pair<double, Index> lambda_max(const LassoProblem& p) {
  validate(p);
  const Vector c = p.design().transpose() * p.target();
  double best = 0.0;
  Index arg = 0;
  for (Index j = 0; j < c.size(); ++j) {
    if (std::abs(c(j)) > best) {
      best = std::abs(c(j));
      arg = j;
    }
  }
  return {best, arg};
}

LassoPath::LassoPath(const LassoProblem& p) : problem_(p), gram_(p.design()) {
  const auto [lmax, arg] = sls::lambda_max(p);
  (void)arg;
  lambda_max_ = lmax;
  lambda_ = lmax;
  tie_tol_ = 1e-12 * std::max(1.0, lambda_max_);
  in_active_.assign(p.design().cols(), 0);
  excluded_mask_.assign(p.design().cols(), 0);
  refresh_segment();
}

Vector LassoPath::dense_solution() const {
  Vector x = Vector::Zero(problem_.design().cols());
  for (Index i = 0; i < active_size(); ++i) x(active_[i]) = coef_(i);
  return x;
}

void LassoPath::refresh_segment() {
  const Index s = active_size();
  if (s == 0) {
    ls_coef_.resize(0);
    direction_.resize(0);
    coef_.resize(0);
    ls_residual_ = problem_.target();
    direction_image_ = Vector::Zero(problem_.design().rows());
    return;
  }
  Vector aty(s);
  Vector sgn(s);
  for (Index i = 0; i < s; ++i) {
    aty(i) = problem_.design().col(active_[i]).dot(problem_.target());
    sgn(i) = signs_[i];
  }
  ls_coef_ = gram_.solve(aty);
  direction_ = gram_.solve(sgn);
  coef_ = ls_coef_ - lambda_ * direction_;

  ls_residual_ = problem_.target();
  direction_image_.setZero(problem_.design().rows());
  for (Index i = 0; i < s; ++i) {
    ls_residual_ -= ls_coef_(i) * problem_.design().col(active_[i]);
    direction_image_ += direction_(i) * problem_.design().col(active_[i]);
  }
}

LassoPath::Candidate LassoPath::find_next_event() const {
  Candidate best_ins, best_del;
  if (lambda_ <= 0.0) return best_ins;

  const Matrix& a = problem_.design();
  const Index s = active_size();

  // Along the segment, the correlation of column j is affine in lambda:
  // c_j(lambda) = b_j + lambda * g_j.
  if (s < a.rows()) {
    const Vector b = a.transpose() * ls_residual_;
    const Vector g = s > 0 ? Vector(a.transpose() * direction_image_)
                           : Vector(Vector::Zero(a.cols()));
    for (Index j = 0; j < a.cols(); ++j) {
      if (in_active_[j] || excluded_mask_[j]) continue;
      for (const double bound : {1.0, -1.0}) {
        const double denom = bound - g(j);
        if (std::abs(denom) < 1e-14) continue;
        const double lam = b(j) / denom;
        if (!(lam > 0.0) || lam > lambda_ + tie_tol_) continue;
        // A just-deleted column touches the boundary at its deletion point;
        // skip that root so it cannot bounce straight back in.
        if (j == last_removed_ && lam >= last_removed_at_ - tie_tol_) continue;
        const double eff = std::min(lam, lambda_);
        const bool better =
            !best_ins.exists || eff > best_ins.lambda + tie_tol_ ||
            (eff >= best_ins.lambda - tie_tol_ && j < best_ins.column);
        if (better) {
          best_ins.exists = true;
          best_ins.lambda = eff;
          best_ins.kind = PathEventKind::insert;
          best_ins.column = j;
          best_ins.sign = bound;
        }
      }
    }
  }

  for (Index i = 0; i < s; ++i) {
    const double d = direction_(i);
    if (d == 0.0) continue;
    double lam = ls_coef_(i) / d;
    bool valid = lam > 0.0 && lam < lambda_ - tie_tol_;
    if (!valid && std::abs(coef_(i)) <= tie_tol_ && signs_[i] * d < 0.0) {
      // Freshly inserted coefficient that would move against its sign:
      // remove it in a zero-length step.
      lam = lambda_;
      valid = true;
    }
    if (!valid) continue;
    const double eff = std::min(lam, lambda_);
    const bool better =
        !best_del.exists || eff > best_del.lambda + tie_tol_ ||
        (eff >= best_del.lambda - tie_tol_ && active_[i] < best_del.column);
    if (better) {
      best_del.exists = true;
      best_del.lambda = eff;
      best_del.kind = PathEventKind::remove;
      best_del.column = active_[i];
      best_del.position = i;
    }
  }

  if (!best_ins.exists) return best_del;
  if (!best_del.exists) return best_ins;
  // Simultaneous events resolve insertions first.
  return best_ins.lambda >= best_del.lambda - tie_tol_ ? best_ins : best_del;
}

void LassoPath::apply_insert(const Candidate& c) {
  gram_.insert(c.column);  // SingularGram propagates to advance()
  active_.push_back(c.column);
  signs_.push_back(c.sign);
  in_active_[c.column] = 1;
  lambda_ = std::min(lambda_, c.lambda);
  refresh_segment();
  events_.push_back({lambda_, PathEventKind::insert, c.column});
  ++steps_;
}

void LassoPath::apply_remove(const Candidate& c) {
  gram_.remove(c.position);
  active_.erase(active_.begin() + c.position);
  signs_.erase(signs_.begin() + c.position);
  in_active_[c.column] = 0;
  lambda_ = std::min(lambda_, c.lambda);
  last_removed_ = c.column;
  last_removed_at_ = lambda_;
  refresh_segment();
  events_.push_back({lambda_, PathEventKind::remove, c.column});
  ++steps_;
}

bool LassoPath::advance(double floor, bool descend_on_exhaust) {
  while (true) {
    const Candidate c = find_next_event();
    if (!c.exists || c.lambda <= floor) {
      if (descend_on_exhaust) descend_to(std::max(floor, 0.0));
      return false;
    }
    if (c.kind == PathEventKind::insert) {
      try {
        apply_insert(c);
      } catch (const SingularGram&) {
        excluded_mask_[c.column] = 1;
        excluded_.push_back(c.column);
        continue;
      }
    } else {
      apply_remove(c);
    }
    return true;
  }
}

bool LassoPath::step() { return advance(0.0, false); }

bool LassoPath::step_above(double floor) { return advance(floor, true); }

double LassoPath::peek_next_lambda() const {
  const Candidate c = find_next_event();
  return c.exists ? c.lambda : 0.0;
}

void LassoPath::descend_to(double lam) {
  lam = std::max(lam, 0.0);
  if (lam > lambda_ + tie_tol_)
    throw std::logic_error("descend_to cannot increase lambda");
  lambda_ = std::min(lambda_, lam);
  if (active_size() > 0) coef_ = ls_coef_ - lambda_ * direction_;
}

void LassoPath::start_at(double lam) {
  if (active_size() > 0) throw std::logic_error("start_at requires an empty active set");
  lambda_ = std::max(lam, lambda_max_);
}

LassoPath solve_until_support_size(const LassoProblem& p, Index target, Index max_steps) {
  if (target < 0) throw std::invalid_argument("target support size must be >= 0");
  LassoPath path(p);
  if (target == 0) return path;
  const Index budget = max_steps > 0 ? max_steps : 10 * target;
  while (path.active_size() < target) {
    if (path.steps_taken() >= budget) {
      path.mark_budget_exceeded();
      return path;
    }
    if (!path.step()) {
      path.descend_to(0.0);
      return path;
    }
  }
  path.descend_to(path.peek_next_lambda());
  return path;
}

LassoPath solve_for_lambda(const LassoProblem& p, double lam, Index max_steps) {
  if (!(lam >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  LassoPath path(p);
  const Index budget = max_steps > 0 ? max_steps : 10 * p.design().cols();
  if (lam >= path.lambda_max_value()) {
    path.start_at(lam);
    return path;
  }
  while (true) {
    if (path.steps_taken() >= budget) {
      path.mark_budget_exceeded();
      return path;
    }
    if (!path.step_above(lam)) return path;
  }
}

}  // namespace sls
