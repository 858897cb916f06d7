#ifndef SLS_BENCH_HPP
#define SLS_BENCH_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sls/dictionary.hpp"
#include "sls/greedy.hpp"
#include "sls/types.hpp"

namespace sls {

std::uint64_t splitmix64(std::uint64_t& state);
/// Fixed splittable scheme: child = mix(mix(master ^ C*(a+1)) ^ C*(b+1))
/// with C = 0x9E3779B97F4A7C15 and mix = splitmix64.  Reproducible under
/// any trial execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);
std::string seed_scheme_description();

/// One randomized sparse-deconvolution trial.
struct DeconvolutionProblem {
  std::shared_ptr<const Dictionary> dictionary;
  SupportSet true_support;
  Vector true_amplitudes;  // aligned with true_support.selected
  Vector clean_data;
  Vector noise;
  Vector observed;  // clean_data + noise
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// K distinct positions drawn uniformly subject to pairwise distance
/// >= min_gap, amplitudes (uniform sign) x (uniform magnitude in [0.2, 1]).
/// Throws InfeasiblePlacement when min_gap cannot be honored.
std::pair<SupportSet, Vector> generate_sparse_signal(Index n_atoms, Index k,
                                                     std::mt19937_64& rng, Index min_gap = 1);

/// Draws i.i.d. standard normal noise and rescales it so that
/// 10 log10(|clean|^2 / |noise|^2) equals snr_db exactly.  snr_db = +inf
/// yields zero noise; a zero clean signal with finite snr throws ZeroSignal.
Vector add_noise_snr(const Vector& clean, double snr_db, std::mt19937_64& rng);

DeconvolutionProblem make_trial_problem(std::shared_ptr<const Dictionary> dict, Index k,
                                        double snr_db, std::uint64_t seed, Index min_gap = 1);

/// Noise-free two-spike instance on which plain correlation peaks strictly
/// between the spikes, so correlation-driven selection picks a wrong atom
/// first.  The separation is swept upward from 2 until the property holds;
/// throws NotFound when the pulse is too narrow for any interference.
struct InterferenceInstance {
  DeconvolutionProblem problem;
  Index separation = 0;        // fine-grid distance between the two spikes
  Index misleading_atom = -1;  // argmax of |A^T y|, between the spikes
};
InterferenceInstance construct_interference_instance(const ConvolutionSpec& spec,
                                                     std::mt19937_64& rng);

/// Globally optimal support of size <= k by enumeration.  Guarded by
/// C(n_atoms, k) <= 1e6; throws TooLarge beyond that.
struct OracleResult {
  SupportSet support;
  Vector amplitudes;
  double residual_sq = 0.0;
};
OracleResult exhaustive_oracle(const Dictionary& d, const Vector& y, Index k);

/// l1-regularized baseline: runs the homotopy path on the unprojected
/// problem until the active set reaches k, then reports that support with
/// least-squares amplitudes on it.
GreedyResult bpdn_baseline(const Dictionary& d, const Vector& y, Index k,
                           Index homotopy_budget = 0, bool record_path_events = false);

struct SolverOptions {
  int sls_multiplier = 3;
  Index homotopy_budget = 0;
  bool record_path_events = false;
};
using SolverFn =
    std::function<GreedyResult(const Dictionary&, const Vector&, Index, const SolverOptions&)>;

/// Built-in solvers in canonical order: omp, ols, sls, bpdn.  Unknown names
/// throw std::invalid_argument.
const std::vector<std::pair<std::string, SolverFn>>& builtin_solvers();
SolverFn find_solver(const std::string& name);

struct TrialMetrics {
  std::string method;
  Index k = 0;
  Index trial = 0;
  std::uint64_t seed = 0;
  double coeff_error = 0.0;     // |x_hat - x_true|^2 over the full atom grid
  double residual_error = 0.0;  // |y - A x_hat|^2
  bool exact_recovery = false;
  double wall_time_s = 0.0;
  bool early_termination = false;
};

struct CampaignSpec {
  std::vector<Index> k_grid;
  Index trials = 50;
  double snr_db = 20.0;
  std::vector<std::string> methods = {"omp", "ols", "sls", "bpdn"};
  std::uint64_t master_seed = 1;
  Index min_gap = 1;
  SolverOptions options;
  int threads = 1;
  std::string trace_dir;  // per-trial homotopy event dumps when nonempty
};

struct MethodAggregate {
  std::string method;
  Index k = 0;
  Index trials = 0;
  double mean_coeff_error = 0.0;
  double mean_residual_error = 0.0;
  double recovery_rate = 0.0;
  double mean_wall_time_s = 0.0;
  Index early_terminations = 0;
};

struct BenchmarkReport {
  std::vector<TrialMetrics> trials;         // ordered by (K, trial, method)
  std::vector<MethodAggregate> aggregates;  // ordered by (method, K)
  std::string seed_scheme;
  std::uint64_t master_seed = 0;
  double snr_db = 0.0;
  Index n_obs = 0;
  Index n_atoms = 0;
};

/// Runs every configured method on trials * |k_grid| generated problems.
/// Trials are independent work items; the report is a pure function of the
/// spec and dictionary up to wall times, for any thread count.
BenchmarkReport run_campaign(const CampaignSpec& spec, std::shared_ptr<const Dictionary> dict);

TrialMetrics evaluate_trial(const DeconvolutionProblem& problem, const std::string& method,
                            const GreedyResult& result, Index k, Index trial, double seconds);

}  // namespace sls

#endif
