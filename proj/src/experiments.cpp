#include "spectemp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "spectemp/filter_id_linear.hpp"
#include "spectemp/filter_id_psd.hpp"
#include "spectemp/filter_id_symmetric.hpp"
#include "spectemp/ingest.hpp"
#include "spectemp/io.hpp"
#include "spectemp/templates.hpp"
#include "spectemp/topology.hpp"

namespace spectemp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Mat randn_mat(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = gauss(rng);
  return m;
}

Mat chol_lower(const Mat& spd) {
  Eigen::LLT<Mat> llt(spd);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("cholesky failed on a covariance draw");
  return llt.matrixL();
}

double relative_error(const Mat& est, const Mat& truth) {
  return (est - truth).norm() / truth.norm();
}

double sign_invariant_error(const Mat& est, const Mat& truth) {
  return std::min((est - truth).norm(), (est + truth).norm()) / truth.norm();
}

Vec draw_taps(const Vec& eigenvalues, int taps, Rng& rng, double floor) {
  if (floor > 0.0) return draw_fir_coeffs(eigenvalues, taps, rng, floor);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec h(taps);
  for (int i = 0; i < taps; ++i) h(i) = unif(rng);
  return h;
}

// Direct eps=0 estimator used on exact or near-exact templates.
RecoveryResult recover_exact(const SpectralTemplates& templates, ConstraintVariant variant,
                             int max_iters, bool stall) {
  RecoveryProblem problem;
  problem.templates = templates;
  problem.epsilon = 0.0;
  problem.constraint_set.variant = variant;
  problem.options.max_iters = max_iters;
  problem.options.tol = 1e-7;
  problem.options.stall_tol = stall ? 1e-6 : 0.0;
  return recover_shift(problem);
}

struct SweepPick {
  Mat s;
  double epsilon = 0.0;
  double violation = 0.0;
  bool feasible = false;
  int iterations = 0;
};

// Warm-started feasibility sweep used on sampled-covariance templates.
SweepPick recover_sweep(const SpectralTemplates& templates, ConstraintVariant variant,
                        const std::vector<double>& grid) {
  ConstraintSet cs;
  cs.variant = variant;
  SweepOptions sweep;
  sweep.stop_at_first_feasible = true;
  RecoveryOptions options;
  options.tol = 1e-6;
  SweepResult res = epsilon_sweep(templates, cs, grid, sweep, options);
  const SweepRow& row = (res.smallest_feasible_index >= 0)
                            ? res.rows[res.smallest_feasible_index]
                            : res.rows.back();
  SweepPick pick;
  pick.s = row.s;
  pick.epsilon = row.epsilon;
  pick.violation = row.violation;
  pick.feasible = row.feasible;
  for (const auto& r : res.rows) pick.iterations += r.iterations;
  return pick;
}

std::vector<double> default_grid(ExperimentKind kind) {
  if (kind == ExperimentKind::psd_karate)
    return {0.0, 0.01, 0.03, 0.08, 0.15, 0.3, 0.5, 0.8, 1.2, 2.0, 3.5};
  return {0.0, 0.003, 0.01, 0.03, 0.08, 0.15, 0.3, 0.5, 0.8, 1.2};
}

// ---------------------------------------------------------------------------

std::vector<ResultRow> run_linear_io(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  const int max_m = *std::max_element(cfg.m_values.begin(), cfg.m_values.end());
  const bool noiseless = cfg.noise_db == -kInf;
  for (std::uint64_t seed : cfg.seeds) {
    Rng rng(seed);
    Gso graph = erdos_renyi(cfg.n, cfg.er_p, rng());
    const Mat s_true = normalize_scale(graph.matrix, 0);
    Vec taps = draw_taps(eigh(graph.matrix).values, cfg.filter_taps, rng, cfg.coeff_floor);
    GraphFilter filt = fir_filter(graph, taps);
    Mat x_all = uniform_signals(cfg.n, max_m, 0.0, 100.0, rng());
    Mat y_all = filt.matrix * x_all;
    if (!noiseless) y_all = add_noise(y_all, cfg.noise_db, rng());
    for (int m : cfg.m_values) {
      const Mat x = x_all.leftCols(m);
      const Mat y = y_all.leftCols(m);
      for (const std::string& method : cfg.methods) {
        ResultRow row;
        row.experiment = experiment_name(cfg.experiment);
        row.seed = seed;
        row.m = m;
        row.p = m;
        row.method = method;
        auto t0 = std::chrono::steady_clock::now();
        try {
          GraphFilter est = (method == "ls-asym") ? identify_ls_asymmetric(x, y)
                                                  : identify_ls(x, y);
          row.filter_error = relative_error(est.matrix, filt.matrix);
          if (cfg.recover_topology && method == "ls" && noiseless) {
            SpectralTemplates tpl = templates_from_matrix(est.matrix);
            RecoveryResult rec = recover_exact(tpl, ConstraintVariant::adjacency, 50000, m < cfg.n);
            row.topology_error = recovery_error(rec.s, s_true);
            row.diagnostics = "viol=" + fmt_short(rec.violation) +
                              ";iters=" + std::to_string(rec.iterations);
          }
        } catch (const std::exception& e) {
          row.failed = true;
          row.diagnostics = e.what();
        }
        row.runtime_ms = elapsed_ms(t0);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_psd_karate(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  const std::string path = cfg.graph_file.empty() ? "data/karate.edges" : cfg.graph_file;
  Gso base = load_edge_list(path);
  const Mat ln = normalized_laplacian(base.matrix);
  Gso shift = shift_from_normalized_laplacian(ln);
  const Vec lam = eigh(shift.matrix).values;
  const int nk = shift.n();
  const int max_m = *std::max_element(cfg.m_values.begin(), cfg.m_values.end());
  const long max_p = *std::max_element(cfg.p_values.begin(), cfg.p_values.end());
  const std::vector<double> grid = cfg.eps_grid.empty() ? default_grid(cfg.experiment)
                                                        : cfg.eps_grid;
  for (std::uint64_t seed : cfg.seeds) {
    Rng rng(seed);
    Vec taps = draw_taps(lam, cfg.filter_taps, rng, cfg.coeff_floor);
    GraphFilter filt = fir_filter(shift, taps);
    std::vector<Mat> cxs;
    std::vector<Mat> outputs;  // per process, filtered signals at max_p samples
    for (int m = 0; m < max_m; ++m) {
      Mat cx = random_spd_covariance(nk, cfg.condition_cap, rng());
      Mat x = chol_lower(cx) * randn_mat(nk, static_cast<int>(max_p), rng);
      outputs.push_back(filt.matrix * x);
      cxs.push_back(std::move(cx));
    }
    for (int m : cfg.m_values) {
      for (long p : cfg.p_values) {
        ResultRow row;
        row.experiment = experiment_name(cfg.experiment);
        row.seed = seed;
        row.m = m;
        row.p = p;
        row.method = "psd-multi";
        auto t0 = std::chrono::steady_clock::now();
        try {
          std::vector<CovariancePair> pairs;
          for (int i = 0; i < m; ++i)
            pairs.push_back({cxs[i], sample_covariance(outputs[i].leftCols(p)),
                             static_cast<int>(p)});
          PsdIdentifyResult est = identify_psd_multi(pairs);
          row.filter_error = relative_error(est.filter.matrix, filt.matrix);
          if (cfg.recover_topology) {
            SpectralTemplates tpl = templates_from_matrix(est.filter.matrix);
            SweepPick pick = recover_sweep(tpl, ConstraintVariant::normalized_laplacian, grid);
            row.topology_error = recovery_error(pick.s, ln);
            row.diagnostics = "eps=" + fmt_short(pick.epsilon) +
                              ";viol=" + fmt_short(pick.violation) +
                              ";feasible=" + (pick.feasible ? "1" : "0");
          }
        } catch (const std::exception& e) {
          row.failed = true;
          row.diagnostics = e.what();
        }
        row.runtime_ms = elapsed_ms(t0);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_symmetric_compare(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  const int max_m = *std::max_element(cfg.m_values.begin(), cfg.m_values.end());
  for (std::uint64_t seed : cfg.seeds) {
    Rng rng(seed);
    Gso graph = erdos_renyi(cfg.n, cfg.er_p, rng());
    const Mat s_true = normalize_scale(graph.matrix, 0);
    Vec taps = draw_taps(eigh(graph.matrix).values, cfg.filter_taps, rng, cfg.coeff_floor);
    GraphFilter filt = fir_filter(graph, taps);
    std::vector<CovariancePair> all_pairs;
    for (int m = 0; m < max_m; ++m) {
      Mat cx = random_spd_covariance(cfg.n, cfg.condition_cap, rng());
      Mat cy = sym(filt.matrix * cx * filt.matrix);
      all_pairs.push_back({std::move(cx), std::move(cy), 0});
    }
    for (int m : cfg.m_values) {
      std::vector<CovariancePair> pairs(all_pairs.begin(), all_pairs.begin() + m);
      for (const std::string& method : cfg.methods) {
        if (method == "sdr" && m < 2) continue;
        ResultRow row;
        row.experiment = experiment_name(cfg.experiment);
        row.seed = seed;
        row.m = m;
        row.p = 0;
        row.method = method;
        auto t0 = std::chrono::steady_clock::now();
        try {
          Mat est;
          if (method == "pgd") {
            PgdConfig pc;
            pc.restarts = cfg.restarts;
            pc.delta = 1e-9;
            pc.max_iters = 3000;
            PgdResult pr = pgd_identify(pairs, pc, rng());
            est = pr.filter.matrix;
            row.diagnostics = "objective=" + fmt_short(pr.objective) +
                              ";iters=" + std::to_string(pr.iterations_total);
          } else if (method == "sdr") {
            SdrResult sr = sdr_identify(pairs, cfg.sdr_draws, rng());
            est = sr.filter.matrix;
            row.diagnostics = "sdp_iters=" + std::to_string(sr.sdp_iterations) +
                              ";conv=" + (sr.sdp_converged ? "1" : "0");
          } else {
            throw std::invalid_argument("unknown method for symmetric-compare: " + method);
          }
          row.filter_error = sign_invariant_error(est, filt.matrix);
          if (cfg.recover_topology) {
            SpectralTemplates tpl = templates_from_matrix(est);
            RecoveryResult rec = recover_exact(tpl, ConstraintVariant::adjacency, 30000, false);
            row.topology_error = recovery_error(rec.s, s_true);
          }
        } catch (const std::exception& e) {
          row.failed = true;
          row.diagnostics = e.what();
        }
        row.runtime_ms = elapsed_ms(t0);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_budget_tradeoff(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  const int max_m = *std::max_element(cfg.m_values.begin(), cfg.m_values.end());
  if (cfg.budget <= 0) throw std::invalid_argument("budget-tradeoff: budget must be positive");
  for (std::uint64_t seed : cfg.seeds) {
    Rng rng(seed);
    Gso graph = erdos_renyi(cfg.n, cfg.er_p, rng());
    const Mat s_true = normalize_scale(graph.matrix, 0);
    Vec taps = draw_taps(eigh(graph.matrix).values, cfg.filter_taps, rng, cfg.coeff_floor);
    GraphFilter filt = fir_filter(graph, taps);
    std::vector<Mat> cxs, chols;
    for (int m = 0; m < max_m; ++m) {
      Mat cx = random_spd_covariance(cfg.n, cfg.condition_cap, rng());
      chols.push_back(chol_lower(cx));
      cxs.push_back(std::move(cx));
    }
    std::vector<Mat> noise;
    for (int m = 0; m < max_m; ++m)
      noise.push_back(randn_mat(cfg.n, static_cast<int>(cfg.budget), rng));
    for (int m : cfg.m_values) {
      const long p = cfg.budget / m;
      ResultRow row;
      row.experiment = experiment_name(cfg.experiment);
      row.seed = seed;
      row.m = m;
      row.p = p;
      row.method = "sdr";
      auto t0 = std::chrono::steady_clock::now();
      try {
        std::vector<CovariancePair> pairs;
        for (int i = 0; i < m; ++i) {
          Mat y = filt.matrix * (chols[i] * noise[i].leftCols(p));
          pairs.push_back({cxs[i], sample_covariance(y), static_cast<int>(p)});
        }
        SdrResult sr = sdr_identify(pairs, cfg.sdr_draws, rng());
        row.filter_error = sign_invariant_error(sr.filter.matrix, filt.matrix);
        row.diagnostics = "sdp_iters=" + std::to_string(sr.sdp_iterations) +
                          ";conv=" + (sr.sdp_converged ? "1" : "0");
        if (cfg.recover_topology) {
          SpectralTemplates tpl = templates_from_matrix(sr.filter.matrix);
          RecoveryResult rec = recover_exact(tpl, ConstraintVariant::adjacency, 10000, true);
          row.topology_error = recovery_error(rec.s, s_true);
        }
      } catch (const std::exception& e) {
        row.failed = true;
        row.diagnostics = e.what();
      }
      row.runtime_ms = elapsed_ms(t0);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ResultRow> run_ingest_recover(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  const std::vector<double> grid = cfg.eps_grid.empty() ? default_grid(cfg.experiment)
                                                        : cfg.eps_grid;
  for (std::uint64_t seed : cfg.seeds) {
    ResultRow row;
    row.experiment = experiment_name(cfg.experiment);
    row.seed = seed;
    row.m = 2;
    row.p = cfg.ingest_days;
    row.method = "psd-multi";
    auto t0 = std::chrono::steady_clock::now();
    const std::filesystem::path csv =
        std::filesystem::temp_directory_path() /
        ("spectemp-ingest-" + std::to_string(seed) + ".csv");
    try {
      Rng rng(seed);
      Gso graph = erdos_renyi(cfg.n, cfg.er_p, rng());
      const Mat s_true = normalize_scale(graph.matrix, 0);
      const Vec lam = eigh(graph.matrix).values;
      const double alpha = 0.9 / lam.cwiseAbs().maxCoeff();
      GraphFilter filt = iir_filter(graph, alpha);
      Mat cx_weekday = random_spd_covariance(cfg.n, cfg.condition_cap, rng());
      Mat cx_weekend = random_spd_covariance(cfg.n, cfg.condition_cap, rng());
      Mat lw = chol_lower(cx_weekday), le = chol_lower(cx_weekend);
      std::vector<std::vector<int>> days(2);
      for (int day = 0; day < cfg.ingest_days; ++day) days[day % 7 < 5 ? 0 : 1].push_back(day);
      std::vector<Mat> xs(2), ys(2);  // 0 = weekday, 1 = weekend
      for (int pr = 0; pr < 2; ++pr) {
        xs[pr] = (pr == 0 ? lw : le) * randn_mat(cfg.n, static_cast<int>(days[pr].size()), rng);
        ys[pr] = filt.matrix * xs[pr];
        if (cfg.noise_db != -kInf) ys[pr] = add_noise(ys[pr], cfg.noise_db, rng());
      }
      {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot write " + csv.string());
        out << "node,timestamp,value\n";
        for (int pr = 0; pr < 2; ++pr)
          for (size_t c = 0; c < days[pr].size(); ++c) {
            const long day = days[pr][c];
            for (int node = 0; node < cfg.n; ++node) {
              out << node << ',' << (24L * day + 8) << ','
                  << fmt(xs[pr](node, static_cast<int>(c))) << '\n';
              out << node << ',' << (24L * day + 18) << ','
                  << fmt(ys[pr](node, static_cast<int>(c))) << '\n';
            }
          }
      }
      std::vector<ProcessSpec> procs = {
          {"weekday", {0, 1, 2, 3, 4}, {6, 12}, {16, 22}},
          {"weekend", {5, 6}, {6, 12}, {16, 22}},
      };
      IngestResult ing = ingest_signals(csv.string(), procs, cfg.n);
      double roundtrip = 0.0;
      for (int pr = 0; pr < 2; ++pr) {
        roundtrip = std::max(roundtrip, (ing.pairs[pr].c_x - sample_covariance(xs[pr]))
                                            .cwiseAbs()
                                            .maxCoeff());
        roundtrip = std::max(roundtrip, (ing.pairs[pr].c_y_hat - sample_covariance(ys[pr]))
                                            .cwiseAbs()
                                            .maxCoeff());
      }
      PsdIdentifyResult est = identify_psd_multi(ing.pairs);
      row.filter_error = relative_error(est.filter.matrix, filt.matrix);
      if (cfg.recover_topology) {
        SpectralTemplates tpl = templates_from_matrix(est.filter.matrix);
        SweepPick pick = recover_sweep(tpl, ConstraintVariant::adjacency, grid);
        row.topology_error = recovery_error(pick.s, s_true);
        row.diagnostics = "roundtrip=" + fmt_short(roundtrip) + ";eps=" + fmt_short(pick.epsilon) +
                          ";feasible=" + (pick.feasible ? "1" : "0");
      } else {
        row.diagnostics = "roundtrip=" + fmt_short(roundtrip);
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.diagnostics = e.what();
    }
    std::error_code ec;
    std::filesystem::remove(csv, ec);
    row.runtime_ms = elapsed_ms(t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::linear_io: return "linear-io";
    case ExperimentKind::psd_karate: return "psd-karate";
    case ExperimentKind::symmetric_compare: return "symmetric-compare";
    case ExperimentKind::budget_tradeoff: return "budget-tradeoff";
    case ExperimentKind::ingest_recover: return "ingest-recover";
  }
  throw std::logic_error("unreachable");
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "linear-io") return ExperimentKind::linear_io;
  if (name == "psd-karate") return ExperimentKind::psd_karate;
  if (name == "symmetric-compare") return ExperimentKind::symmetric_compare;
  if (name == "budget-tradeoff") return ExperimentKind::budget_tradeoff;
  if (name == "ingest-recover") return ExperimentKind::ingest_recover;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

ExperimentConfig default_experiment_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::linear_io:
      c.n = 20;
      c.filter_taps = 4;
      c.m_values = {5, 10, 15, 18, 20, 22, 25, 30};
      c.methods = {"ls"};
      for (std::uint64_t s = 0; s < 5; ++s) c.seeds.push_back(3000 + s);
      break;
    case ExperimentKind::psd_karate:
      c.filter_taps = 3;
      c.m_values = {1, 5, 10};
      c.p_values = {100, 1000, 10000};
      c.methods = {"psd-multi"};
      c.condition_cap = 100.0;
      for (std::uint64_t s = 0; s < 20; ++s) c.seeds.push_back(5000 + s);
      break;
    case ExperimentKind::symmetric_compare:
      c.n = 15;
      c.filter_taps = 3;
      c.m_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
      c.methods = {"pgd", "sdr"};
      c.condition_cap = 100.0;
      for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(1000 + s);
      break;
    case ExperimentKind::budget_tradeoff:
      c.n = 15;
      c.filter_taps = 3;
      c.coeff_floor = 0.1;
      c.m_values = {2, 3, 4, 5};
      c.budget = 4000;
      c.methods = {"sdr"};
      c.condition_cap = 3000.0;
      for (std::uint64_t s = 0; s < 30; ++s) c.seeds.push_back(8100 + s);
      break;
    case ExperimentKind::ingest_recover:
      c.n = 12;
      c.condition_cap = 10.0;
      c.methods = {"psd-multi"};
      c.noise_db = -40.0;
      c.ingest_days = 700;
      for (std::uint64_t s = 0; s < 3; ++s) c.seeds.push_back(4000 + s);
      break;
  }
  return c;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  if (!j.contains("experiment"))
    throw std::invalid_argument("experiment config: missing 'experiment'");
  ExperimentConfig c = default_experiment_config(
      experiment_from_name(j.at("experiment").get<std::string>()));
  c.raw = j;
  if (j.contains("n")) c.n = j.at("n").get<int>();
  if (j.contains("er_p")) c.er_p = j.at("er_p").get<double>();
  if (j.contains("graph_file")) c.graph_file = j.at("graph_file").get<std::string>();
  if (j.contains("filter_taps")) c.filter_taps = j.at("filter_taps").get<int>();
  if (j.contains("coeff_floor")) c.coeff_floor = j.at("coeff_floor").get<double>();
  if (j.contains("m_values")) c.m_values = j.at("m_values").get<std::vector<int>>();
  if (j.contains("p_values")) c.p_values = j.at("p_values").get<std::vector<long>>();
  if (j.contains("budget")) c.budget = j.at("budget").get<long>();
  if (j.contains("noise_db")) {
    if (j.at("noise_db").is_null())
      c.noise_db = -kInf;
    else
      c.noise_db = j.at("noise_db").get<double>();
  }
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("seed_base") && j.contains("seed_count")) {
    c.seeds.clear();
    const std::uint64_t base = j.at("seed_base").get<std::uint64_t>();
    const int count = j.at("seed_count").get<int>();
    for (int s = 0; s < count; ++s) c.seeds.push_back(base + s);
  }
  if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
  if (j.contains("sdr_draws")) c.sdr_draws = j.at("sdr_draws").get<int>();
  if (j.contains("condition_cap")) c.condition_cap = j.at("condition_cap").get<double>();
  if (j.contains("eps_grid")) c.eps_grid = j.at("eps_grid").get<std::vector<double>>();
  if (j.contains("recover_topology")) c.recover_topology = j.at("recover_topology").get<bool>();
  if (j.contains("ingest_days")) c.ingest_days = j.at("ingest_days").get<int>();

  if (c.n < 2) throw std::invalid_argument("experiment config: n must be at least 2");
  if (c.er_p <= 0.0 || c.er_p >= 1.0)
    throw std::invalid_argument("experiment config: er_p must lie in (0, 1)");
  if (c.seeds.empty()) throw std::invalid_argument("experiment config: no seeds");
  if (c.filter_taps < 1) throw std::invalid_argument("experiment config: filter_taps < 1");
  if (c.restarts < 1 || c.sdr_draws < 1)
    throw std::invalid_argument("experiment config: counts must be positive");
  for (int m : c.m_values)
    if (m < 1) throw std::invalid_argument("experiment config: M values must be positive");
  for (long p : c.p_values)
    if (p < 1) throw std::invalid_argument("experiment config: P values must be positive");
  if (c.experiment == ExperimentKind::budget_tradeoff && c.budget < 1)
    throw std::invalid_argument("experiment config: budget must be positive");
  if (c.experiment == ExperimentKind::psd_karate && c.p_values.empty())
    throw std::invalid_argument("experiment config: psd-karate needs P values");
  if (c.m_values.empty() && c.experiment != ExperimentKind::ingest_recover)
    throw std::invalid_argument("experiment config: no M values");
  return c;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::string& x_axis) {
  std::map<std::pair<std::string, double>, std::vector<std::pair<double, double>>> groups;
  for (const auto& row : rows) {
    if (row.failed) continue;
    std::string label = row.method;
    double x = row.m;
    if (x_axis == "p") {
      label += "/M=" + std::to_string(row.m);
      x = static_cast<double>(row.p);
    }
    groups[{label, x}].push_back({row.filter_error, row.topology_error});
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, vals] : groups) {
    for (int metric = 0; metric < 2; ++metric) {
      std::vector<double> v;
      for (const auto& pr : vals) {
        const double e = metric == 0 ? pr.first : pr.second;
        if (std::isfinite(e)) v.push_back(e);
      }
      if (v.empty()) continue;
      double mean = 0.0;
      for (double e : v) mean += e;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double e : v) var += (e - mean) * (e - mean);
      var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
      SummaryRow s;
      s.method = key.first;
      s.x = key.second;
      s.metric = metric == 0 ? "filter_error" : "topology_error";
      s.mean = mean;
      s.stddev = std::sqrt(var);
      s.count = static_cast<int>(v.size());
      out.push_back(std::move(s));
    }
  }
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput out;
  auto t0 = std::chrono::steady_clock::now();
  switch (config.experiment) {
    case ExperimentKind::linear_io: out.rows = run_linear_io(config); break;
    case ExperimentKind::psd_karate: out.rows = run_psd_karate(config); break;
    case ExperimentKind::symmetric_compare: out.rows = run_symmetric_compare(config); break;
    case ExperimentKind::budget_tradeoff: out.rows = run_budget_tradeoff(config); break;
    case ExperimentKind::ingest_recover: out.rows = run_ingest_recover(config); break;
  }
  out.summary = summarize(out.rows,
                          config.experiment == ExperimentKind::psd_karate ? "p" : "m");
  nlohmann::json timings = nlohmann::json::array();
  int failures = 0;
  for (const auto& row : out.rows) {
    timings.push_back(row.runtime_ms);
    if (row.failed) ++failures;
  }
  out.diagnostics["experiment"] = experiment_name(config.experiment);
  out.diagnostics["rows"] = out.rows.size();
  out.diagnostics["failed_rows"] = failures;
  out.diagnostics["total_ms"] = elapsed_ms(t0);
  out.diagnostics["row_runtime_ms"] = std::move(timings);
  if (!config.raw.is_null()) out.diagnostics["config"] = config.raw;
  return out;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "experiment,seed,m,p,method,filter_error,topology_error,failed,diagnostics\n";
  for (const auto& row : rows) {
    std::string diag = row.diagnostics;
    for (char& ch : diag)
      if (ch == ',' || ch == '\n') ch = ';';
    out << row.experiment << ',' << row.seed << ',' << row.m << ',' << row.p << ','
        << row.method << ',' << fmt(row.filter_error) << ',' << fmt(row.topology_error) << ','
        << (row.failed ? 1 : 0) << ',' << diag << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "method,x,metric,mean,std,count\n";
  for (const auto& row : rows)
    out << row.method << ',' << fmt(row.x) << ',' << row.metric << ',' << fmt(row.mean) << ','
        << fmt(row.stddev) << ',' << row.count << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spectemp
