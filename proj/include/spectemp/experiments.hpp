#pragma once

// Benchmark experiment runners: synthetic protocols sweeping pair counts,
// sample sizes, and sensing budgets, with per-row results and plot-ready
// mean/std summaries.

#include <cstdint>
#include <string>
#include <vector>

#include "spectemp/diffusion.hpp"
#include "spectemp/graph.hpp"
#include "spectemp/linalg.hpp"

#include "json.hpp"

namespace spectemp {

enum class ExperimentKind { linear_io, psd_karate, symmetric_compare, budget_tradeoff, ingest_recover };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::linear_io;
  int n = 20;                  // node count for synthetic graphs
  double er_p = 0.3;           // edge probability
  std::string graph_file;      // edge-list path; overrides the synthetic graph
  int filter_taps = 4;         // FIR coefficient count
  double coeff_floor = 0.0;    // redraw floor on the spectral response (0 = plain draws)
  std::vector<int> m_values;   // process / pair counts
  std::vector<long> p_values;  // sample counts (empty = exact covariances)
  long budget = 0;             // M*P budget for budget-tradeoff
  double noise_db = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;  // subset of {ls, ls-asym, psd-multi, pgd, sdr}
  int restarts = 10;                 // PGD restarts
  int sdr_draws = 10;                // randomized-rounding draws
  double condition_cap = 100.0;      // C_x eigenvalue spread cap
  std::vector<double> eps_grid;      // feasibility sweep grid (empty = direct eps=0 solve)
  bool recover_topology = true;
  int ingest_days = 700;  // event-log length for ingest-recover
  nlohmann::json raw;     // original config for provenance
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig default_experiment_config(ExperimentKind kind);

struct ResultRow {
  std::string experiment;
  std::uint64_t seed = 0;
  int m = 0;
  long p = 0;
  std::string method;
  double filter_error = std::numeric_limits<double>::quiet_NaN();
  double topology_error = std::numeric_limits<double>::quiet_NaN();
  double runtime_ms = 0.0;  // informational; kept out of the deterministic CSVs
  std::string diagnostics;
  bool failed = false;
};

struct SummaryRow {
  std::string method;
  double x = 0.0;  // sweep coordinate (M, P, or budget split)
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
  nlohmann::json diagnostics;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

// results.csv carries every ResultRow field except runtime_ms so that a rerun
// with the same config is byte-identical; timings go to the diagnostics JSON.
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::string& x_axis);

}  // namespace spectemp
