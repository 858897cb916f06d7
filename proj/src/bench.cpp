#include "sls/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "sls/errors.hpp"
#include "sls/matrix_io.hpp"

namespace sls {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

Vector scatter(const SupportSet& support, const Vector& amplitudes, Index n_atoms) {
  Vector x = Vector::Zero(n_atoms);
  for (Index i = 0; i < support.size(); ++i) x(support.selected[i]) = amplitudes(i);
  return x;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  state += kGolden;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = master ^ (kGolden * (a + 1));
  std::uint64_t first = splitmix64(s);
  std::uint64_t t = first ^ (kGolden * (b + 1));
  return splitmix64(t);
}

std::string seed_scheme_description() {
  return "child_seed(master,K,trial) = splitmix64(splitmix64(master xor C*(K+1)) xor "
         "C*(trial+1)), C = 0x9E3779B97F4A7C15";
}

std::pair<SupportSet, Vector> generate_sparse_signal(Index n_atoms, Index k,
                                                     std::mt19937_64& rng, Index min_gap) {
  if (k < 0 || k > n_atoms) throw std::invalid_argument("k must lie in [0, n_atoms]");
  if (min_gap < 1) throw std::invalid_argument("min_gap must be >= 1");

  SupportSet support;
  support.universe = n_atoms;
  if (k == 0) return {support, Vector()};

  // Bijection onto gap-free placements: draw k distinct positions from a
  // reduced universe, then re-expand the mandatory gaps.
  const Index reduced = n_atoms - (k - 1) * (min_gap - 1);
  if (reduced < k) throw InfeasiblePlacement("cannot place spikes with the requested gap");

  std::vector<char> taken(reduced, 0);
  std::vector<Index> picks;
  picks.reserve(k);
  for (Index j = reduced - k; j < reduced; ++j) {  // Floyd's sampling
    std::uniform_int_distribution<Index> u(0, j);
    const Index t = u(rng);
    if (taken[t]) {
      picks.push_back(j);
      taken[j] = 1;
    } else {
      picks.push_back(t);
      taken[t] = 1;
    }
  }
  std::sort(picks.begin(), picks.end());
  support.selected.resize(k);
  for (Index i = 0; i < k; ++i) support.selected[i] = picks[i] + i * (min_gap - 1);

  Vector amplitudes(k);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (Index i = 0; i < k; ++i) {
    const double sign = u01(rng) < 0.5 ? -1.0 : 1.0;
    const double magnitude = 0.2 + 0.8 * u01(rng);
    amplitudes(i) = sign * magnitude;
  }
  return {support, amplitudes};
}

Vector add_noise_snr(const Vector& clean, double snr_db, std::mt19937_64& rng) {
  if (std::isinf(snr_db) && snr_db > 0.0) return Vector::Zero(clean.size());
  if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite or +inf");
  const double clean_norm = clean.norm();
  if (clean_norm < 1e-300) throw ZeroSignal("zero signal with finite target SNR");

  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector noise(clean.size());
  for (Index i = 0; i < noise.size(); ++i) noise(i) = gauss(rng);
  const double scale = clean_norm / (noise.norm() * std::pow(10.0, snr_db / 20.0));
  return noise * scale;
}

DeconvolutionProblem make_trial_problem(std::shared_ptr<const Dictionary> dict, Index k,
                                        double snr_db, std::uint64_t seed, Index min_gap) {
  DeconvolutionProblem problem;
  problem.dictionary = std::move(dict);
  problem.snr_db = snr_db;
  problem.seed = seed;

  std::mt19937_64 rng(seed);
  auto [support, amplitudes] =
      generate_sparse_signal(problem.dictionary->n_atoms(), k, rng, min_gap);
  problem.true_support = std::move(support);
  problem.true_amplitudes = std::move(amplitudes);

  problem.clean_data =
      problem.dictionary->atoms *
      scatter(problem.true_support, problem.true_amplitudes, problem.dictionary->n_atoms());
  problem.noise = add_noise_snr(problem.clean_data, snr_db, rng);
  problem.observed = problem.clean_data + problem.noise;
  return problem;
}

InterferenceInstance construct_interference_instance(const ConvolutionSpec& spec,
                                                     std::mt19937_64& rng) {
  const ConvolutionDictionary built = build_convolution_dictionary(spec);
  auto dict = std::make_shared<const Dictionary>(built.dictionary);
  const Index m = dict->n_atoms();
  if (m < 3) throw NotFound("dictionary too small for a two-spike instance");

  // Anchor the pair somewhere in the interior so both responses are whole.
  const Index lo = m / 4;
  const Index hi = std::max(lo + 1, (3 * m) / 4);
  std::uniform_int_distribution<Index> anchor(lo, hi - 1);
  const Index base = anchor(rng);
  const Index max_sep = std::min<Index>(8 * spec.upsampling + 2, m - 1);

  for (Index sep = 2; sep <= max_sep; ++sep) {
    const Index j1 = std::min(std::max<Index>(base - sep / 2, 0), m - 1 - sep);
    const Index j2 = j1 + sep;
    Vector y = dict->atoms.col(j1) + dict->atoms.col(j2);
    const Vector correlation = (dict->atoms.transpose() * y).cwiseAbs();
    Index arg = 0;
    for (Index j = 1; j < m; ++j)
      if (correlation(j) > correlation(arg)) arg = j;
    if (arg > j1 && arg < j2) {
      InterferenceInstance inst;
      inst.separation = sep;
      inst.misleading_atom = arg;
      inst.problem.dictionary = dict;
      inst.problem.true_support = {{j1, j2}, m};
      inst.problem.true_amplitudes = Vector::Constant(2, 1.0);
      inst.problem.clean_data = y;
      inst.problem.noise = Vector::Zero(dict->n_obs());
      inst.problem.observed = std::move(y);
      inst.problem.snr_db = std::numeric_limits<double>::infinity();
      inst.problem.seed = 0;
      return inst;
    }
  }
  throw NotFound("no separation in the sweep makes correlation peak between the spikes");
}

namespace {

double binomial_guard(Index n, Index k) {
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > 1e15) return c;  // already far beyond any guard
  }
  return c;
}

}  // namespace

OracleResult exhaustive_oracle(const Dictionary& d, const Vector& y, Index k) {
  if (y.size() != d.n_obs()) throw DimensionMismatch("observation length != dictionary rows");
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  k = std::min(k, d.n_atoms());
  if (binomial_guard(d.n_atoms(), k) > 1e6)
    throw TooLarge("support enumeration exceeds the 1e6 guard");

  OracleResult best;
  best.support.universe = d.n_atoms();
  best.residual_sq = y.squaredNorm();

  std::vector<Index> combo;
  for (Index size = 1; size <= k; ++size) {
    combo.assign(size, 0);
    for (Index i = 0; i < size; ++i) combo[i] = i;
    while (true) {
      Matrix sub(d.n_obs(), size);
      for (Index i = 0; i < size; ++i) sub.col(i) = d.atoms.col(combo[i]);
      // Independent dense route (column-pivoted QR), deliberately not the
      // incremental factorization used by the solvers.
      const Vector coeffs = sub.colPivHouseholderQr().solve(y);
      const double residual_sq = (y - sub * coeffs).squaredNorm();
      if (residual_sq < best.residual_sq) {
        best.residual_sq = residual_sq;
        best.support.selected = combo;
        best.amplitudes = coeffs;
      }
      // next lexicographic combination
      Index pos = size - 1;
      while (pos >= 0 && combo[pos] == d.n_atoms() - size + pos) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (Index i = pos + 1; i < size; ++i) combo[i] = combo[i - 1] + 1;
    }
  }
  return best;
}

GreedyResult bpdn_baseline(const Dictionary& d, const Vector& y, Index k, Index homotopy_budget,
                           bool record_path_events) {
  if (k < 1) throw std::invalid_argument("bpdn baseline needs k >= 1");
  if (!d.normalized) throw NotNormalized("bpdn baseline requires a normalized dictionary");
  if (y.size() != d.n_obs()) throw DimensionMismatch("observation length != dictionary rows");

  const LassoProblem problem(d.atoms, y);
  const LassoPath path = solve_until_support_size(problem, k, homotopy_budget);

  GreedyResult result;
  result.support.universe = d.n_atoms();
  result.early_termination = path.budget_exceeded();

  // Same final orthogonalization as the greedy methods; a path atom that is
  // numerically inside the span of the previous ones is dropped.
  SupportFactorization factorization(d.atoms);
  for (Index j : path.active()) {
    try {
      factorization.append(j);
      result.support.selected.push_back(j);
    } catch (const DegenerateAtom&) {
      result.early_termination = true;
    }
  }
  if (result.support.size() < k) result.early_termination = true;

  result.amplitudes = factorization.solve_amplitudes(y);
  result.residual = y;
  for (Index i = 0; i < result.support.size(); ++i)
    result.residual -= result.amplitudes(i) * d.atoms.col(result.support.selected[i]);

  if (record_path_events) {
    IterationTrace record;
    record.path_events = path.events();
    result.trace.push_back(std::move(record));
  }
  return result;
}

const std::vector<std::pair<std::string, SolverFn>>& builtin_solvers() {
  static const std::vector<std::pair<std::string, SolverFn>> registry = {
      {"omp",
       [](const Dictionary& d, const Vector& y, Index k, const SolverOptions&) {
         GreedyConfig cfg;
         cfg.rule = SelectionRule::omp;
         cfg.sparsity = k;
         return run_forward_selection(d, y, cfg);
       }},
      {"ols",
       [](const Dictionary& d, const Vector& y, Index k, const SolverOptions&) {
         GreedyConfig cfg;
         cfg.rule = SelectionRule::ols;
         cfg.sparsity = k;
         return run_forward_selection(d, y, cfg);
       }},
      {"sls",
       [](const Dictionary& d, const Vector& y, Index k, const SolverOptions& opt) {
         GreedyConfig cfg;
         cfg.rule = SelectionRule::sls;
         cfg.sparsity = k;
         cfg.sls_multiplier = opt.sls_multiplier;
         cfg.homotopy_step_budget = opt.homotopy_budget;
         cfg.record_path_events = opt.record_path_events;
         return run_forward_selection(d, y, cfg);
       }},
      {"bpdn",
       [](const Dictionary& d, const Vector& y, Index k, const SolverOptions& opt) {
         return bpdn_baseline(d, y, k, opt.homotopy_budget, opt.record_path_events);
       }},
  };
  return registry;
}

SolverFn find_solver(const std::string& name) {
  for (const auto& [solver_name, fn] : builtin_solvers())
    if (solver_name == name) return fn;
  throw std::invalid_argument("unknown method: " + name);
}

TrialMetrics evaluate_trial(const DeconvolutionProblem& problem, const std::string& method,
                            const GreedyResult& result, Index k, Index trial, double seconds) {
  const Index m = problem.dictionary->n_atoms();
  TrialMetrics metrics;
  metrics.method = method;
  metrics.k = k;
  metrics.trial = trial;
  metrics.seed = problem.seed;
  const Vector estimate = scatter(result.support, result.amplitudes, m);
  const Vector truth = scatter(problem.true_support, problem.true_amplitudes, m);
  metrics.coeff_error = (estimate - truth).squaredNorm();
  metrics.residual_error = result.residual.squaredNorm();
  metrics.exact_recovery = result.support.same_atoms(problem.true_support);
  metrics.wall_time_s = seconds;
  metrics.early_termination = result.early_termination;
  return metrics;
}

namespace {

void dump_path_events(const std::string& dir, const std::string& stem,
                      const std::vector<IterationTrace>& trace) {
  Index iteration = 0;
  for (const auto& record : trace) {
    if (record.path_events.empty()) continue;
    std::ofstream out(dir + "/" + stem + "_iter" + std::to_string(iteration) + ".txt");
    for (const auto& ev : record.path_events)
      out << format_full(ev.lambda) << ' '
          << (ev.kind == PathEventKind::insert ? "insert" : "delete") << ' ' << ev.column
          << '\n';
    ++iteration;
  }
}

}  // namespace

BenchmarkReport run_campaign(const CampaignSpec& spec, std::shared_ptr<const Dictionary> dict) {
  if (!dict) throw std::invalid_argument("campaign needs a dictionary");
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.k_grid.empty()) throw std::invalid_argument("k grid must be nonempty");
  if (spec.methods.empty()) throw std::invalid_argument("no methods configured");
  const Index rank_limit = std::min(dict->n_obs(), dict->n_atoms());
  for (Index k : spec.k_grid)
    if (k < 1 || k > rank_limit)
      throw std::invalid_argument("k grid entries must lie in [1, min(n_obs, n_atoms)]");

  std::vector<std::pair<std::string, SolverFn>> solvers;
  for (const auto& name : spec.methods) solvers.emplace_back(name, find_solver(name));

  SolverOptions options = spec.options;
  if (!spec.trace_dir.empty()) {
    std::filesystem::create_directories(spec.trace_dir);
    options.record_path_events = true;
  }

  const Index jobs = static_cast<Index>(spec.k_grid.size()) * spec.trials;
  std::vector<std::vector<TrialMetrics>> slots(jobs);

  std::atomic<Index> cursor{0};
  auto worker = [&]() {
    while (true) {
      const Index job = cursor.fetch_add(1);
      if (job >= jobs) return;
      const Index ki = job / spec.trials;
      const Index trial = job % spec.trials;
      const Index k = spec.k_grid[ki];
      const std::uint64_t seed =
          derive_seed(spec.master_seed, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(trial));
      const DeconvolutionProblem problem =
          make_trial_problem(dict, k, spec.snr_db, seed, spec.min_gap);

      std::vector<TrialMetrics>& out = slots[job];
      out.reserve(solvers.size());
      for (const auto& [name, solver] : solvers) {
        const auto t0 = std::chrono::steady_clock::now();
        const GreedyResult result = solver(*dict, problem.observed, k, options);
        const double seconds = seconds_since(t0);
        out.push_back(evaluate_trial(problem, name, result, k, trial, seconds));
        if (!spec.trace_dir.empty())
          dump_path_events(spec.trace_dir,
                           "K" + std::to_string(k) + "_t" + std::to_string(trial) + "_" + name,
                           result.trace);
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(spec.threads, static_cast<int>(jobs)));
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchmarkReport report;
  report.seed_scheme = seed_scheme_description();
  report.master_seed = spec.master_seed;
  report.snr_db = spec.snr_db;
  report.n_obs = dict->n_obs();
  report.n_atoms = dict->n_atoms();
  for (const auto& slot : slots)
    report.trials.insert(report.trials.end(), slot.begin(), slot.end());

  for (const auto& [name, solver] : solvers) {
    (void)solver;
    for (Index k : spec.k_grid) {
      MethodAggregate agg;
      agg.method = name;
      agg.k = k;
      for (const TrialMetrics& t : report.trials) {
        if (t.method != name || t.k != k) continue;
        ++agg.trials;
        agg.mean_coeff_error += t.coeff_error;
        agg.mean_residual_error += t.residual_error;
        agg.recovery_rate += t.exact_recovery ? 1.0 : 0.0;
        agg.mean_wall_time_s += t.wall_time_s;
        agg.early_terminations += t.early_termination ? 1 : 0;
      }
      if (agg.trials > 0) {
        agg.mean_coeff_error /= agg.trials;
        agg.mean_residual_error /= agg.trials;
        agg.recovery_rate /= agg.trials;
        agg.mean_wall_time_s /= agg.trials;
      }
      report.aggregates.push_back(std::move(agg));
    }
  }
  return report;
}

}  // namespace sls
