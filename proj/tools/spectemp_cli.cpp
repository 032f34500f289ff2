// spectemp command line: generate datasets, identify diffusion filters,
// recover shift operators, run benchmark experiments, ingest event logs.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spectemp/experiments.hpp"
#include "spectemp/filter_id_linear.hpp"
#include "spectemp/filter_id_psd.hpp"
#include "spectemp/filter_id_symmetric.hpp"
#include "spectemp/graph.hpp"
#include "spectemp/ingest.hpp"
#include "spectemp/io.hpp"
#include "spectemp/templates.hpp"
#include "spectemp/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spectemp;

namespace {

// Config mistakes exit 1, runtime failures exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path resolve_output(const std::string& dir) {
  fs::path p(dir);
  if (!p.is_absolute()) {
    if (const char* root = std::getenv("SPECTEMP_OUTPUT_ROOT")) p = fs::path(root) / p;
  }
  fs::create_directories(p);
  return p;
}

json load_config(const std::string& path) {
  try {
    return io::read_json(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::vector<CovariancePair> load_pairs(const json& manifest, const fs::path& dir) {
  if (!manifest.contains("pairs")) throw ConfigError("dataset has no covariance pairs");
  std::vector<CovariancePair> pairs;
  for (const auto& pj : manifest.at("pairs")) {
    CovariancePair pair;
    pair.c_x = io::read_matrix_csv((dir / pj.at("cx").get<std::string>()).string());
    pair.c_y_hat = io::read_matrix_csv((dir / pj.at("cy").get<std::string>()).string());
    pair.samples = pj.value("samples", 0);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

Vec draw_taps_config(const Gso& graph, const ExperimentConfig& ec, Rng& rng) {
  const Vec lam = eigh(graph.matrix).values;
  if (ec.coeff_floor > 0.0) return draw_fir_coeffs(lam, ec.filter_taps, rng, ec.coeff_floor);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec h(ec.filter_taps);
  for (int i = 0; i < ec.filter_taps; ++i) h(i) = unif(rng);
  return h;
}

// ---------------------------------------------------------------------------
// gen: materialize a synthetic dataset

int cmd_gen(const std::string& config_path, const std::string& out_dir) {
  json cfg = load_config(config_path);
  ExperimentConfig ec;
  try {
    ec = parse_experiment_config(cfg);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = resolve_output(out_dir);
  const std::uint64_t seed = ec.seeds.front();
  Rng rng(seed);

  Gso graph;
  Mat target;
  GraphFilter filt;
  json manifest;
  manifest["experiment"] = experiment_name(ec.experiment);
  manifest["seed"] = seed;

  if (ec.experiment == ExperimentKind::psd_karate) {
    const std::string gpath = ec.graph_file.empty() ? "data/karate.edges" : ec.graph_file;
    Gso base = load_edge_list(gpath);
    Mat ln = normalized_laplacian(base.matrix);
    graph = shift_from_normalized_laplacian(ln);
    target = ln;
  } else {
    graph = erdos_renyi(ec.n, ec.er_p, rng());
    target = normalize_scale(graph.matrix, 0);
  }
  manifest["n"] = graph.n();

  Vec taps = draw_taps_config(graph, ec, rng);
  filt = fir_filter(graph, taps);

  if (graph.kind == GsoKind::adjacency) {
    save_edge_list((dir / "graph.edges").string(), graph, 1e-8);
    manifest["files"]["edges"] = "graph.edges";
  }
  io::write_gso_json((dir / "graph.json").string(), graph);
  io::write_matrix_csv((dir / "target.csv").string(), target);
  io::write_filter_json((dir / "filter.json").string(), filt);
  manifest["files"]["graph"] = "graph.json";
  manifest["files"]["target"] = "target.csv";
  manifest["files"]["filter"] = "filter.json";

  if (ec.experiment == ExperimentKind::linear_io) {
    const int m = ec.m_values.empty() ? ec.n : ec.m_values.back();
    Mat x = uniform_signals(graph.n(), m, 0.0, 100.0, rng());
    Mat y = filt.matrix * x;
    if (ec.noise_db != -std::numeric_limits<double>::infinity())
      y = add_noise(y, ec.noise_db, rng());
    io::write_matrix_csv((dir / "x.csv").string(), x);
    io::write_matrix_csv((dir / "y.csv").string(), y);
    manifest["files"]["x"] = "x.csv";
    manifest["files"]["y"] = "y.csv";
    manifest["m"] = m;
    manifest["noise_db"] = ec.noise_db == -std::numeric_limits<double>::infinity()
                               ? json(nullptr)
                               : json(ec.noise_db);
  } else {
    const int m = ec.m_values.empty() ? 2 : ec.m_values.back();
    const long p = ec.p_values.empty() ? 0 : ec.p_values.back();
    json pairs = json::array();
    for (int i = 0; i < m; ++i) {
      Mat cx = random_spd_covariance(graph.n(), ec.condition_cap, rng());
      Mat cy;
      if (p > 0) {
        Mat x = gaussian_signals(cx, static_cast<int>(p), rng());
        cy = sample_covariance(filt.matrix * x);
      } else {
        cy = propagate_covariance(filt, cx);
      }
      const std::string cxf = "cx_" + std::to_string(i) + ".csv";
      const std::string cyf = "cy_" + std::to_string(i) + ".csv";
      io::write_matrix_csv((dir / cxf).string(), cx);
      io::write_matrix_csv((dir / cyf).string(), cy);
      pairs.push_back({{"cx", cxf}, {"cy", cyf}, {"samples", p}});
    }
    manifest["pairs"] = std::move(pairs);
    manifest["m"] = m;
    manifest["p"] = p;
  }
  io::write_json((dir / "manifest.json").string(), manifest);
  std::cout << "dataset written to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// identify

int cmd_identify(const std::string& dataset_dir, const std::string& method,
                 const std::string& params_path, const std::string& out_dir) {
  const fs::path dir(dataset_dir);
  json manifest = io::read_json((dir / "manifest.json").string());
  json params = params_path.empty() ? json::object() : load_config(params_path);
  const fs::path out = resolve_output(out_dir);

  json diag;
  diag["method"] = method;
  GraphFilter est;
  auto t0 = std::chrono::steady_clock::now();

  if (method == "ls" || method == "ls-asym") {
    if (!manifest.contains("files") || !manifest.at("files").contains("x"))
      throw ConfigError("method '" + method + "' needs an input/output dataset (x.csv, y.csv)");
    Mat x = io::read_matrix_csv((dir / manifest["files"]["x"].get<std::string>()).string());
    Mat y = io::read_matrix_csv((dir / manifest["files"]["y"].get<std::string>()).string());
    est = method == "ls" ? identify_ls(x, y) : identify_ls_asymmetric(x, y);
  } else if (method == "psd" || method == "psd-multi") {
    std::vector<CovariancePair> pairs = load_pairs(manifest, dir);
    if (method == "psd") {
      est = identify_psd_single(pairs.front());
    } else {
      PsdIdentifyResult r = identify_psd_multi(pairs);
      est = r.filter;
      diag["pre_projection_deviation"] = r.pre_projection_deviation;
      diag["min_eigenvalue_pre"] = r.min_eigenvalue_pre;
    }
  } else if (method == "pgd") {
    std::vector<CovariancePair> pairs = load_pairs(manifest, dir);
    PgdConfig pc;
    pc.restarts = params.value("restarts", 10);
    pc.max_iters = params.value("max_iters", 10000);
    pc.delta = params.value("delta", 1e-8);
    PgdResult r = pgd_identify(pairs, pc, params.value("seed", std::uint64_t{17}));
    est = r.filter;
    diag["objective"] = r.objective;
    diag["iterations"] = r.iterations_total;
    diag["converged"] = r.converged;
  } else if (method == "sdr") {
    std::vector<CovariancePair> pairs = load_pairs(manifest, dir);
    if (pairs.size() < 2) throw ConfigError("method 'sdr' needs at least M=2 covariance pairs");
    SdrResult r = sdr_identify(pairs, params.value("draws", 100),
                               params.value("seed", std::uint64_t{17}));
    est = r.filter;
    diag["sdp_objective"] = r.sdp_objective;
    diag["sdp_iterations"] = r.sdp_iterations;
    diag["sdp_converged"] = r.sdp_converged;
    diag["residual"] = r.residual_eps;
  } else {
    throw ConfigError("unknown method '" + method +
                      "' (expected ls, ls-asym, psd, psd-multi, pgd, sdr)");
  }
  diag["runtime_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (manifest.contains("files") && manifest.at("files").contains("filter")) {
    GraphFilter truth =
        io::read_filter_json((dir / manifest["files"]["filter"].get<std::string>()).string());
    const double err = std::min((est.matrix - truth.matrix).norm(),
                                (est.matrix + truth.matrix).norm()) /
                       truth.matrix.norm();
    diag["filter_error"] = err;
  }

  io::write_filter_json((out / "hhat.json").string(), est);
  io::write_json((out / "identify_diagnostics.json").string(), diag);
  std::cout << "filter written to " << (out / "hhat.json").string() << "\n";
  if (diag.contains("filter_error")) std::cout << "filter_error " << diag["filter_error"] << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// recover

int cmd_recover(const std::string& filter_path, const std::string& constraint, double epsilon,
                const std::vector<double>& sweep, const std::string& out_dir) {
  GraphFilter filt = io::read_filter_json(filter_path);
  SpectralTemplates tpl = extract_spectral_templates(filt);
  ConstraintSet cs;
  if (constraint == "adjacency")
    cs.variant = ConstraintVariant::adjacency;
  else if (constraint == "normalized-laplacian")
    cs.variant = ConstraintVariant::normalized_laplacian;
  else
    throw ConfigError("unknown constraint '" + constraint +
                      "' (expected adjacency or normalized-laplacian)");
  const fs::path out = resolve_output(out_dir);

  json report;
  report["constraint"] = constraint;
  report["degenerate_templates"] = tpl.degenerate;
  Mat s;
  if (!sweep.empty()) {
    SweepOptions so;
    so.stop_at_first_feasible = true;
    SweepResult sr = epsilon_sweep(tpl, cs, sweep, so);
    const SweepRow& row =
        sr.smallest_feasible_index >= 0 ? sr.rows[sr.smallest_feasible_index] : sr.rows.back();
    s = row.s;
    report["epsilon"] = row.epsilon;
    report["violation"] = row.violation;
    report["feasible"] = row.feasible;
    report["l1"] = row.objective_l1;
    json grid = json::array();
    for (const auto& r : sr.rows)
      grid.push_back({{"epsilon", r.epsilon},
                      {"l1", r.objective_l1},
                      {"violation", r.violation},
                      {"feasible", r.feasible}});
    report["sweep"] = std::move(grid);
  } else {
    RecoveryProblem problem;
    problem.templates = tpl;
    problem.epsilon = epsilon;
    problem.constraint_set = cs;
    RecoveryResult rec = recover_shift(problem);
    s = rec.feasible ? rec.s : rec.best_s;
    report["epsilon"] = epsilon;
    report["violation"] = rec.feasible ? rec.violation : rec.best_violation;
    report["feasible"] = rec.feasible;
    report["converged"] = rec.converged;
    report["iterations"] = rec.iterations;
    report["l1"] = rec.objective_l1;
    json lam = json::array();
    for (int i = 0; i < rec.lambda.size(); ++i) lam.push_back(rec.lambda(i));
    report["lambda"] = std::move(lam);
  }

  Gso recovered{s, cs.variant == ConstraintVariant::adjacency ? GsoKind::adjacency
                                                              : GsoKind::normalized_laplacian};
  io::write_gso_json((out / "shift.json").string(), recovered);
  const double cut = 1e-4 * s.cwiseAbs().maxCoeff();
  save_edge_list((out / "shift.edges").string(), recovered, cut);
  io::write_json((out / "recover_report.json").string(), report);
  std::cout << "shift written to " << (out / "shift.json").string() << " (violation "
            << report["violation"] << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

int cmd_benchmark(const std::string& config_path, const std::string& out_dir) {
  json cfg = load_config(config_path);
  ExperimentConfig ec;
  try {
    ec = parse_experiment_config(cfg);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const fs::path out = resolve_output(out_dir);
  ExperimentOutput result = run_experiment(ec);
  write_results_csv((out / "results.csv").string(), result.rows);
  write_summary_csv((out / "summary.csv").string(), result.summary);
  io::write_json((out / "benchmark_diagnostics.json").string(), result.diagnostics);
  int failed = 0;
  for (const auto& row : result.rows) failed += row.failed ? 1 : 0;
  std::cout << result.rows.size() << " rows (" << failed << " failed) written to "
            << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const std::string& signals_path, const std::string& grouping_path, int nodes,
               const std::string& out_dir) {
  std::vector<ProcessSpec> procs;
  try {
    procs = load_grouping_spec(grouping_path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (nodes < 1) throw ConfigError("--nodes must be positive");
  IngestResult res = ingest_signals(signals_path, procs, nodes);
  const fs::path out = resolve_output(out_dir);
  json manifest;
  manifest["experiment"] = "ingest";
  manifest["n"] = nodes;
  json pairs = json::array();
  for (size_t i = 0; i < res.pairs.size(); ++i) {
    const std::string label = res.signals[i].label;
    const std::string cxf = "cx_" + label + ".csv";
    const std::string cyf = "cy_" + label + ".csv";
    io::write_matrix_csv((out / cxf).string(), res.pairs[i].c_x);
    io::write_matrix_csv((out / cyf).string(), res.pairs[i].c_y_hat);
    io::write_matrix_csv((out / ("x_" + label + ".csv")).string(), res.signals[i].x);
    io::write_matrix_csv((out / ("y_" + label + ".csv")).string(), res.signals[i].y);
    pairs.push_back({{"cx", cxf}, {"cy", cyf}, {"samples", res.pairs[i].samples},
                     {"label", label}});
  }
  manifest["pairs"] = std::move(pairs);
  io::write_json((out / "manifest.json").string(), manifest);
  std::cout << res.pairs.size() << " covariance pairs written to " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph topology inference from diffused signals"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", dataset_dir, method = "ls", params_path;
  std::string filter_path, constraint = "adjacency", signals_path, grouping_path;
  double epsilon = 0.0;
  std::vector<double> sweep;
  int nodes = 0;

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("--config", config_path, "experiment config JSON")->required();
  gen->add_option("--out", out_dir, "output directory");

  auto* identify = app.add_subcommand("identify", "identify the diffusion filter");
  identify->add_option("--dataset", dataset_dir, "dataset directory from gen/ingest")->required();
  identify->add_option("--method", method, "ls | ls-asym | psd | psd-multi | pgd | sdr");
  identify->add_option("--params", params_path, "solver parameter JSON");
  identify->add_option("--out", out_dir, "output directory");

  auto* recover = app.add_subcommand("recover", "recover a sparse shift operator");
  recover->add_option("--filter", filter_path, "identified filter JSON")->required();
  recover->add_option("--constraint", constraint, "adjacency | normalized-laplacian");
  recover->add_option("--epsilon", epsilon, "eigenbasis distance budget");
  recover->add_option("--sweep", sweep, "epsilon grid (overrides --epsilon)");
  recover->add_option("--out", out_dir, "output directory");

  auto* benchmark = app.add_subcommand("benchmark", "run an experiment sweep");
  benchmark->add_option("--config", config_path, "experiment config JSON")->required();
  benchmark->add_option("--out", out_dir, "output directory");

  auto* ingest = app.add_subcommand("ingest", "aggregate an event log into covariance pairs");
  ingest->add_option("--signals", signals_path, "node,timestamp,value CSV")->required();
  ingest->add_option("--grouping", grouping_path, "process grouping JSON")->required();
  ingest->add_option("--nodes", nodes, "node count")->required();
  ingest->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(config_path, out_dir);
    if (identify->parsed()) return cmd_identify(dataset_dir, method, params_path, out_dir);
    if (recover->parsed()) return cmd_recover(filter_path, constraint, epsilon, sweep, out_dir);
    if (benchmark->parsed()) return cmd_benchmark(config_path, out_dir);
    if (ingest->parsed()) return cmd_ingest(signals_path, grouping_path, nodes, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
