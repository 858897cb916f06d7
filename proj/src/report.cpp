#include "sls/report.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sls/matrix_io.hpp"

namespace sls {

std::string trials_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "method,K,trial,seed,coeff_error,residual_error,exact_recovery,wall_time_s,"
         "early_term\n";
  for (const TrialMetrics& t : report.trials) {
    out << t.method << ',' << t.k << ',' << t.trial << ',' << t.seed << ','
        << format_full(t.coeff_error) << ',' << format_full(t.residual_error) << ','
        << (t.exact_recovery ? 1 : 0) << ',' << format_full(t.wall_time_s) << ','
        << (t.early_termination ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string aggregate_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "method,K,mean_coeff_error,recovery_rate,mean_time_s\n";
  for (const MethodAggregate& a : report.aggregates) {
    out << a.method << ',' << a.k << ',' << format_full(a.mean_coeff_error) << ','
        << format_full(a.recovery_rate) << ',' << format_full(a.mean_wall_time_s) << '\n';
  }
  return out.str();
}

std::string summary_json(const BenchmarkReport& report) {
  nlohmann::ordered_json root;
  root["seed_scheme"] = report.seed_scheme;
  root["master_seed"] = report.master_seed;
  root["snr_db"] = report.snr_db;
  root["n_obs"] = report.n_obs;
  root["n_atoms"] = report.n_atoms;
  root["aggregates"] = nlohmann::ordered_json::array();
  for (const MethodAggregate& a : report.aggregates) {
    nlohmann::ordered_json entry;
    entry["method"] = a.method;
    entry["K"] = a.k;
    entry["trials"] = a.trials;
    entry["mean_coeff_error"] = a.mean_coeff_error;
    entry["mean_residual_error"] = a.mean_residual_error;
    entry["recovery_rate"] = a.recovery_rate;
    entry["mean_wall_time_s"] = a.mean_wall_time_s;
    entry["early_terminations"] = a.early_terminations;
    root["aggregates"].push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

namespace {

std::string stem_of(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_report(const std::string& path, const BenchmarkReport& report) {
  write_text(path, trials_csv(report));
  const std::string stem = stem_of(path);
  write_text(stem + "_agg.csv", aggregate_csv(report));
  write_text(stem + "_summary.json", summary_json(report));
}

std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  std::vector<bool> keep;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> row;
    while (std::getline(fields, field, ',')) row.push_back(field);
    if (keep.empty()) {  // header row decides which columns survive
      for (const std::string& name : row)
        keep.push_back(name != "wall_time_s" && name != "mean_time_s");
    }
    bool first = true;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i < keep.size() && !keep[i]) continue;
      if (!first) out << ',';
      out << row[i];
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sls
