// Command-line front end: dictionary generation, benchmark campaigns,
// single-instance solves, and the adversarial two-spike demo.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sls/bench.hpp"
#include "sls/dictionary.hpp"
#include "sls/greedy.hpp"
#include "sls/matrix_io.hpp"
#include "sls/report.hpp"

namespace {

using sls::Index;
using sls::Vector;

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> values;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) values.push_back(std::stoll(token));
  }
  return values;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) names.push_back(token);
  }
  return names;
}

std::shared_ptr<const sls::Dictionary> load_normalized(const std::string& path) {
  sls::Dictionary d = sls::load_dictionary(path);
  if (!d.normalized) d = sls::normalize_columns(d);
  return std::make_shared<const sls::Dictionary>(std::move(d));
}

nlohmann::ordered_json vector_json(const Vector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

nlohmann::ordered_json result_json(const sls::GreedyResult& result) {
  nlohmann::ordered_json node;
  node["support"] = result.support.selected;
  node["amplitudes"] = vector_json(result.amplitudes);
  node["residual_norm"] = result.residual.norm();
  node["early_termination"] = result.early_termination;
  return node;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse approximation solvers and deconvolution benchmark"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Build a convolution dictionary and write it to a file");
  Index gen_n_obs = sls::kDefaultObservations;
  Index gen_n_atoms = sls::kDefaultAtoms;
  Index gen_upsampling = sls::kDefaultUpsampling;
  double gen_sigma = sls::kDefaultPulseSigma;
  double gen_freq = sls::kDefaultPulseFreq;
  std::string gen_out;
  gen->add_option("--n-obs", gen_n_obs, "Observation samples");
  gen->add_option("--n-atoms", gen_n_atoms, "Fine-grid spike positions");
  gen->add_option("--upsampling", gen_upsampling, "Fine samples per observation sample");
  gen->add_option("--pulse-sigma", gen_sigma, "Gaussian envelope width (fine samples)");
  gen->add_option("--pulse-freq", gen_freq, "Cosine frequency (cycles per fine sample)");
  gen->add_option("--out", gen_out, "Output dictionary file")->required();

  // ---- run ----
  auto* run = app.add_subcommand("run", "Run a benchmark campaign");
  std::string run_dict;
  bool run_default_dict = false;
  std::string run_methods = "omp,ols,sls,bpdn";
  std::string run_k_grid = "5,10,20,30,40";
  Index run_trials = 50;
  double run_snr = 20.0;
  std::uint64_t run_seed = 1;
  int run_sls_multiplier = 3;
  Index run_min_gap = 1;
  std::string run_out;
  int run_threads = 1;
  std::string run_trace_dir;
  run->add_option("--dict", run_dict, "Dictionary file (from `gen`)");
  run->add_flag("--default", run_default_dict, "Use the built-in calibrated dictionary");
  run->add_option("--methods", run_methods, "Comma-separated method list");
  run->add_option("--k-grid", run_k_grid, "Comma-separated sparsity levels");
  run->add_option("--trials", run_trials, "Trials per sparsity level");
  run->add_option("--snr-db", run_snr, "Target SNR in dB");
  run->add_option("--seed", run_seed, "Master seed");
  run->add_option("--sls-multiplier", run_sls_multiplier, "Active-set multiplier for sls");
  run->add_option("--min-gap", run_min_gap, "Minimum spike separation (1 = unconstrained)");
  run->add_option("--out", run_out, "Trials CSV path (aggregate CSV and JSON written next to it)")
      ->required();
  run->add_option("--threads", run_threads, "Worker threads");
  run->add_option("--trace-dir", run_trace_dir, "Dump homotopy path events per trial");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Solve one instance and print the solution");
  std::string solve_dict, solve_y, solve_method = "sls";
  Index solve_k = 0;
  int solve_sls_multiplier = 3;
  solve->add_option("--dict", solve_dict, "Dictionary file")->required();
  solve->add_option("--y", solve_y, "Observation file (single-column matrix file)")->required();
  solve->add_option("--method", solve_method, "omp | ols | sls | bpdn");
  solve->add_option("--k", solve_k, "Sparsity level")->required();
  solve->add_option("--sls-multiplier", solve_sls_multiplier, "Active-set multiplier for sls");

  // ---- fig1 ----
  auto* fig1 = app.add_subcommand(
      "fig1", "Build the two-spike interference instance and dump scores and solutions");
  std::string fig1_out;
  Index fig1_n_obs = 60;
  Index fig1_n_atoms = 150;
  Index fig1_upsampling = sls::kDefaultUpsampling;
  double fig1_sigma = sls::kDefaultPulseSigma;
  double fig1_freq = sls::kDefaultPulseFreq;
  std::uint64_t fig1_seed = 1;
  fig1->add_option("--out", fig1_out, "Output JSON path")->required();
  fig1->add_option("--n-obs", fig1_n_obs, "Observation samples");
  fig1->add_option("--n-atoms", fig1_n_atoms, "Fine-grid spike positions");
  fig1->add_option("--upsampling", fig1_upsampling, "Fine samples per observation sample");
  fig1->add_option("--pulse-sigma", fig1_sigma, "Gaussian envelope width");
  fig1->add_option("--pulse-freq", fig1_freq, "Cosine frequency");
  fig1->add_option("--seed", fig1_seed, "Anchor-position seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const sls::ConvolutionSpec spec = sls::default_convolution_spec(
          gen_n_obs, gen_n_atoms, gen_upsampling, gen_sigma, gen_freq);
      const sls::ConvolutionDictionary built = sls::build_convolution_dictionary(spec);
      sls::save_dictionary(gen_out, built.dictionary);
      std::cout << "atoms: " << built.dictionary.n_atoms() << " (dropped "
                << built.dropped_atoms << " trailing positions)\n"
                << "mutual coherence: " << sls::mutual_coherence(built.dictionary) << "\n";
      return 0;
    }

    if (run->parsed()) {
      std::shared_ptr<const sls::Dictionary> dict;
      if (run_default_dict == run_dict.empty()) {
        std::cerr << "run: pass exactly one of --dict PATH or --default\n";
        return 1;
      }
      if (run_default_dict) {
        dict = std::make_shared<const sls::Dictionary>(
            sls::build_convolution_dictionary(sls::default_convolution_spec()).dictionary);
      } else {
        dict = load_normalized(run_dict);
      }

      sls::CampaignSpec spec;
      spec.k_grid = parse_index_list(run_k_grid);
      spec.trials = run_trials;
      spec.snr_db = run_snr;
      spec.methods = parse_name_list(run_methods);
      spec.master_seed = run_seed;
      spec.min_gap = run_min_gap;
      spec.options.sls_multiplier = run_sls_multiplier;
      spec.threads = run_threads;
      spec.trace_dir = run_trace_dir;

      const sls::BenchmarkReport report = sls::run_campaign(spec, dict);
      sls::write_report(run_out, report);
      std::cout << sls::aggregate_csv(report);
      return 0;
    }

    if (solve->parsed()) {
      const auto dict = load_normalized(solve_dict);
      const Vector y = sls::load_vector(solve_y);
      sls::SolverOptions options;
      options.sls_multiplier = solve_sls_multiplier;
      const sls::GreedyResult result = sls::find_solver(solve_method)(*dict, y, solve_k, options);
      std::cout << "support:";
      for (Index j : result.support.selected) std::cout << ' ' << j;
      std::cout << "\namplitudes:";
      for (Index i = 0; i < result.amplitudes.size(); ++i)
        std::cout << ' ' << sls::format_full(result.amplitudes(i));
      std::cout << "\nresidual_norm: " << sls::format_full(result.residual.norm()) << "\n";
      if (result.early_termination) std::cout << "early_termination: true\n";
      return 0;
    }

    if (fig1->parsed()) {
      const sls::ConvolutionSpec spec = sls::default_convolution_spec(
          fig1_n_obs, fig1_n_atoms, fig1_upsampling, fig1_sigma, fig1_freq);
      std::mt19937_64 rng(fig1_seed);
      const sls::InterferenceInstance inst = sls::construct_interference_instance(spec, rng);
      const sls::Dictionary& dict = *inst.problem.dictionary;
      const Vector& y = inst.problem.observed;

      sls::SupportFactorization empty_support(dict.atoms);
      const Vector omp_scores =
          sls::score_omp(dict, sls::SupportSet{{}, dict.n_atoms()}, y);
      const Vector ols_scores = sls::score_ols(dict, empty_support, y);
      sls::GreedyConfig sls_cfg;
      sls_cfg.rule = sls::SelectionRule::sls;
      sls_cfg.sparsity = 2;
      const Vector sls_scores = sls::score_sls(
          sls::build_projected_problem(dict, empty_support, y), 2, sls_cfg);

      nlohmann::ordered_json root;
      root["true_support"] = inst.problem.true_support.selected;
      root["separation"] = inst.separation;
      root["misleading_atom"] = inst.misleading_atom;
      root["observed"] = vector_json(y);
      root["scores"]["omp"] = vector_json(omp_scores);
      root["scores"]["ols"] = vector_json(ols_scores);
      root["scores"]["sls"] = vector_json(sls_scores);

      sls::SolverOptions options;
      for (const std::string& name : {"omp", "ols", "sls"}) {
        const sls::GreedyResult result = sls::find_solver(name)(dict, y, 2, options);
        root["solutions"][name] = result_json(result);
        root["solutions"][name]["exact_recovery"] =
            result.support.same_atoms(inst.problem.true_support);
      }

      std::ofstream out(fig1_out);
      if (!out) throw std::runtime_error("cannot open " + fig1_out);
      out << root.dump(2) << "\n";
      std::cout << "separation: " << inst.separation
                << "\nmisleading atom: " << inst.misleading_atom << "\ntrue support: ["
                << inst.problem.true_support.selected[0] << ", "
                << inst.problem.true_support.selected[1] << "]\n";
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
