#include <doctest.h>

#include <algorithm>
#include <random>

#include "sls/bench.hpp"
#include "sls/greedy.hpp"
#include "test_support.hpp"

using namespace sls;
using test::pseudo_inverse;
using test::random_matrix;
using test::random_orthonormal;
using test::random_vector;

namespace {

Dictionary random_dictionary(Index rows, Index cols, std::mt19937_64& rng) {
  return normalize_columns(Dictionary::from_matrix(random_matrix(rows, cols, rng)));
}

Index argmax(const Vector& v) {
  Index best = 0;
  for (Index j = 1; j < v.size(); ++j)
    if (v(j) > v(best)) best = j;
  return best;
}

}  // namespace

TEST_CASE("score_omp") {
  SUBCASE("identity dictionary scores absolute residual entries") {
    const Dictionary d = Dictionary::from_matrix(Matrix::Identity(3, 3), true);
    Vector r(3);
    r << 0, 3, -5;
    const Vector s = score_omp(d, SupportSet{{}, 3}, r);
    CHECK(s(0) == doctest::Approx(0.0));
    CHECK(s(1) == doctest::Approx(3.0));
    CHECK(s(2) == doctest::Approx(5.0));
    CHECK(argmax(s) == 2);
  }

  SUBCASE("zero residual scores all zero") {
    const Dictionary d = Dictionary::from_matrix(Matrix::Identity(4, 4), true);
    const Vector s = score_omp(d, SupportSet{{}, 4}, Vector::Zero(4));
    CHECK(s.maxCoeff() == 0.0);
  }

  SUBCASE("matches the direct product oracle and masks the support") {
    std::mt19937_64 rng(3);
    const Dictionary d = random_dictionary(9, 14, rng);
    const Vector r = random_vector(9, rng);
    const SupportSet support{{2, 5}, 14};
    const Vector s = score_omp(d, support, r);
    for (Index j = 0; j < 14; ++j) {
      if (j == 2 || j == 5)
        CHECK(s(j) == -std::numeric_limits<double>::infinity());
      else
        CHECK(s(j) == doctest::Approx(std::abs(d.atoms.col(j).dot(r))).epsilon(1e-12));
    }
  }
}

TEST_CASE("score_ols") {
  std::mt19937_64 rng(5);

  SUBCASE("first iteration ranks like omp on a unit-norm dictionary") {
    const Dictionary d = random_dictionary(8, 12, rng);
    const Vector y = random_vector(8, rng);
    SupportFactorization f(d.atoms);
    const Vector ols = score_ols(d, f, y);
    const Vector omp = score_omp(d, SupportSet{{}, 12}, y);
    CHECK(argmax(ols) == argmax(omp));
  }

  SUBCASE("orthonormal dictionary keeps the omp ranking at any support") {
    const Dictionary d =
        Dictionary::from_matrix(random_orthonormal(10, rng), true);
    const Vector y = random_vector(10, rng);
    SupportFactorization f(d.atoms);
    f.append(4);
    f.append(7);
    Vector residual = f.project_residual(y);
    const Vector ols = score_ols(d, f, y);
    const Vector omp = score_omp(d, SupportSet{{4, 7}, 10}, residual);
    // same ranking on the remaining atoms
    std::vector<Index> rest;
    for (Index j = 0; j < 10; ++j)
      if (j != 4 && j != 7) rest.push_back(j);
    auto by_ols = rest, by_omp = rest;
    std::sort(by_ols.begin(), by_ols.end(), [&](Index i, Index j) { return ols(i) > ols(j); });
    std::sort(by_omp.begin(), by_omp.end(), [&](Index i, Index j) { return omp(i) > omp(j); });
    CHECK(by_ols == by_omp);
  }

  SUBCASE("matches the per-candidate dense projection oracle") {
    const Dictionary d = random_dictionary(10, 20, rng);
    const Vector y = random_vector(10, rng);
    SupportFactorization f(d.atoms);
    f.append(3);
    f.append(11);
    const Vector s = score_ols(d, f, y);
    for (Index j = 0; j < 20; ++j) {
      if (j == 3 || j == 11) continue;
      Matrix sub(10, 3);
      sub.col(0) = d.atoms.col(3);
      sub.col(1) = d.atoms.col(11);
      sub.col(2) = d.atoms.col(j);
      const Vector projected = sub * (pseudo_inverse(sub) * y);
      CHECK(s(j) == doctest::Approx(projected.squaredNorm()).epsilon(1e-9));
    }
  }
}

TEST_CASE("build_projected_problem") {
  std::mt19937_64 rng(7);

  SUBCASE("empty support is the identity projection") {
    const Dictionary d = random_dictionary(6, 9, rng);
    const Vector y = random_vector(6, rng);
    SupportFactorization f(d.atoms);
    const ProjectedProblem pp = build_projected_problem(d, f, y);
    CHECK(pp.pruned.empty());
    CHECK((pp.target - y).norm() == 0.0);
    CHECK((pp.atoms - d.atoms).cwiseAbs().maxCoeff() == 0.0);
    CHECK(pp.index_map.size() == 9);
  }

  SUBCASE("an atom equal to a support atom is pruned") {
    Matrix m(4, 3);
    m.col(0) << 1, 0, 0, 0;
    m.col(1) << 0, 1, 0, 0;
    m.col(2) << 1, 0, 0, 0;  // duplicate of column 0
    const Dictionary d = Dictionary::from_matrix(m, true);
    SupportFactorization f(d.atoms);
    f.append(0);
    const ProjectedProblem pp = build_projected_problem(d, f, Vector::Ones(4));
    REQUIRE(pp.pruned.size() == 1);
    CHECK(pp.pruned[0] == 2);
    REQUIRE(pp.index_map.size() == 1);
    CHECK(pp.index_map[0] == 1);
  }

  SUBCASE("each projected column matches the dense projector oracle") {
    const Dictionary d = random_dictionary(8, 12, rng);
    const Vector y = random_vector(8, rng);
    SupportFactorization f(d.atoms);
    f.append(1);
    f.append(6);
    const ProjectedProblem pp = build_projected_problem(d, f, y);
    Matrix sub(8, 2);
    sub.col(0) = d.atoms.col(1);
    sub.col(1) = d.atoms.col(6);
    const Matrix projector = Matrix::Identity(8, 8) - sub * pseudo_inverse(sub);
    for (std::size_t r = 0; r < pp.index_map.size(); ++r) {
      const Vector expected = projector * d.atoms.col(pp.index_map[r]);
      CHECK((pp.atoms.col(static_cast<Index>(r)) - expected).norm() < 1e-9);
    }
    CHECK((pp.target - projector * y).norm() < 1e-9);
  }
}

TEST_CASE("score_sls") {
  std::mt19937_64 rng(11);

  SUBCASE("orthonormal dictionary: argmax equals the top correlation") {
    const Dictionary d =
        Dictionary::from_matrix(random_orthonormal(9, rng), true);
    const Vector y = random_vector(9, rng);
    SupportFactorization f(d.atoms);
    const ProjectedProblem pp = build_projected_problem(d, f, y);
    GreedyConfig cfg;
    cfg.rule = SelectionRule::sls;
    cfg.sparsity = 3;
    const Vector s = score_sls(pp, 3, cfg);
    CHECK(argmax(s) == argmax(Vector((d.atoms.transpose() * y).cwiseAbs())));
  }

  SUBCASE("zero projected target raises EmptySolution") {
    const Dictionary d = Dictionary::from_matrix(Matrix::Identity(4, 4), true);
    SupportFactorization f(d.atoms);
    const ProjectedProblem pp = build_projected_problem(d, f, Vector::Zero(4));
    GreedyConfig cfg;
    cfg.sparsity = 2;
    CHECK_THROWS_AS(score_sls(pp, 2, cfg), EmptySolution);
  }
}

TEST_CASE("run_forward_selection") {
  std::mt19937_64 rng(13);

  SUBCASE("sparsity zero returns the observation as residual") {
    const Dictionary d = random_dictionary(5, 8, rng);
    const Vector y = random_vector(5, rng);
    GreedyConfig cfg;
    cfg.sparsity = 0;
    const GreedyResult res = run_forward_selection(d, y, cfg);
    CHECK(res.support.size() == 0);
    CHECK((res.residual - y).norm() == 0.0);
    CHECK(!res.early_termination);
  }

  SUBCASE("identity dictionary selects the top entries for every rule") {
    const Dictionary d = Dictionary::from_matrix(Matrix::Identity(4, 4), true);
    Vector y(4);
    y << 1, -7, 0, 3;
    for (SelectionRule rule : {SelectionRule::omp, SelectionRule::ols, SelectionRule::sls}) {
      GreedyConfig cfg;
      cfg.rule = rule;
      cfg.sparsity = 2;
      const GreedyResult res = run_forward_selection(d, y, cfg);
      REQUIRE(res.support.size() == 2);
      CHECK(res.support.same_atoms(SupportSet{{1, 3}, 4}));
      const Vector dense =
          [&] {
            Vector x = Vector::Zero(4);
            for (Index i = 0; i < 2; ++i) x(res.support.selected[i]) = res.amplitudes(i);
            return x;
          }();
      CHECK(dense(1) == doctest::Approx(-7.0));
      CHECK(dense(3) == doctest::Approx(3.0));
      CHECK(res.residual(0) == doctest::Approx(1.0));
      CHECK(res.residual.tail(3).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  SUBCASE("residual norm never increases across iterations") {
    const Dictionary d = random_dictionary(12, 30, rng);
    const Vector y = random_vector(12, rng);
    for (SelectionRule rule : {SelectionRule::omp, SelectionRule::ols, SelectionRule::sls}) {
      GreedyConfig cfg;
      cfg.rule = rule;
      cfg.sparsity = 6;
      const GreedyResult res = run_forward_selection(d, y, cfg);
      REQUIRE(res.support.size() == 6);
      // replay the selection prefix by prefix
      double previous = y.norm();
      for (Index k = 1; k <= 6; ++k) {
        std::vector<Index> prefix(res.support.selected.begin(),
                                  res.support.selected.begin() + k);
        const Vector amps = least_squares_on_support(d.atoms, prefix, y);
        Vector r = y;
        for (Index i = 0; i < k; ++i) r -= amps(i) * d.atoms.col(prefix[i]);
        CHECK(r.norm() <= previous + 1e-12);
        previous = r.norm();
      }
      // no duplicate selections
      auto sorted = res.support.selected;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      // residual orthogonal to the selected columns
      for (Index j : res.support.selected)
        CHECK(std::abs(d.atoms.col(j).dot(res.residual)) < 1e-9);
    }
  }

  SUBCASE("orthonormal dictionary: all rules return the top-k set") {
    const Dictionary d =
        Dictionary::from_matrix(random_orthonormal(12, rng), true);
    const Vector y = random_vector(12, rng);
    const Vector c = (d.atoms.transpose() * y).cwiseAbs();
    std::vector<Index> order(12);
    for (Index i = 0; i < 12; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Index i, Index j) { return c(i) > c(j); });
    for (Index k : {1, 4, 9, 12}) {
      SupportSet expected{std::vector<Index>(order.begin(), order.begin() + k), 12};
      for (SelectionRule rule : {SelectionRule::omp, SelectionRule::ols, SelectionRule::sls}) {
        GreedyConfig cfg;
        cfg.rule = rule;
        cfg.sparsity = k;
        const GreedyResult res = run_forward_selection(d, y, cfg);
        CHECK(res.support.same_atoms(expected));
      }
    }
  }

  SUBCASE("identical runs produce identical traces") {
    const Dictionary d = random_dictionary(10, 18, rng);
    const Vector y = random_vector(10, rng);
    GreedyConfig cfg;
    cfg.rule = SelectionRule::sls;
    cfg.sparsity = 4;
    cfg.record_score_vectors = true;
    const GreedyResult a = run_forward_selection(d, y, cfg);
    const GreedyResult b = run_forward_selection(d, y, cfg);
    REQUIRE(a.support.selected == b.support.selected);
    CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      CHECK(a.trace[i].selected == b.trace[i].selected);
      CHECK((a.trace[i].scores - b.trace[i].scores).norm() == 0.0);
    }
  }

  SUBCASE("greedy residuals never beat the exhaustive oracle") {
    for (int trial = 0; trial < 10; ++trial) {
      std::mt19937_64 local(200 + trial);
      const Dictionary d = random_dictionary(8, 12, local);
      const Vector y = random_vector(8, local);
      const OracleResult oracle = exhaustive_oracle(d, y, 3);
      for (SelectionRule rule : {SelectionRule::omp, SelectionRule::ols, SelectionRule::sls}) {
        GreedyConfig cfg;
        cfg.rule = rule;
        cfg.sparsity = 3;
        const GreedyResult res = run_forward_selection(d, y, cfg);
        CHECK(res.residual.squaredNorm() >= oracle.residual_sq - 1e-9);
      }
    }
  }
}
