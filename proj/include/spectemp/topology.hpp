#pragma once

#include <vector>

#include "spectemp/graph.hpp"
#include "spectemp/linalg.hpp"
#include "spectemp/templates.hpp"

namespace spectemp {

enum class RecoveryObjective { l1, frobenius, linf };
enum class RecoveryDistance { frobenius, spectral };

struct RecoveryOptions {
  double rho = 1.0;
  int max_iters = 50000;
  double tol = 1e-7;
  double feas_tol = 1e-6;
  /// Every stall_window iterations the relative consensus movement is checked;
  /// below stall_tol the solve stops early and reports the stall (the duals
  /// keep ratcheting on infeasible instances while the iterate stands still).
  int stall_window = 400;
  double stall_tol = 0.0;  // 0 disables stall detection
  /// Pin the rotated coordinate of the Perron-like template column to zero
  /// (the null eigenvalue every normalized Laplacian carries). Defaults on for
  /// the normalized-Laplacian profile; ignored for the adjacency profile.
  bool anchor_null_eigenvalue = true;
  int best_iterate_interval = 50;
};

struct RecoveryProblem {
  SpectralTemplates templates;
  double epsilon = 0.0;
  RecoveryObjective objective = RecoveryObjective::l1;
  ConstraintSet constraint_set;
  RecoveryDistance distance = RecoveryDistance::frobenius;
  RecoveryOptions options;
};

struct RecoveryWarmStart {
  Mat z, u1, u2, u3;
  bool valid = false;
};

struct RecoveryResult {
  Mat s;
  Vec lambda;
  double violation = 0.0;       // worst constraint or ball-membership breach
  double distance = 0.0;        // d(S, V diag(lambda) V^T)
  double objective_l1 = 0.0;
  bool feasible = false;
  bool converged = false;
  bool stalled = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// Minimal-violation iterate seen along the way (= s when the solve is clean).
  Mat best_s;
  double best_violation = 0.0;
  RecoveryWarmStart warm;
};

/// Sparse shift recovery from spectral templates: minimize ||S||_1 subject to
/// the structural constraint set and ||S - V diag(lambda) V^T||_F <= epsilon,
/// by three-block consensus splitting (entrywise prox / structural projection /
/// rotated-coordinate ball projection).
RecoveryResult recover_shift(const RecoveryProblem& problem,
                             const RecoveryWarmStart* warm = nullptr);

/// recover_shift with the normalized-Laplacian constraint profile.
RecoveryResult recover_shift_laplacian(const SpectralTemplates& templates, double epsilon,
                                       const RecoveryOptions& options = {});

/// Index of the template column with the most coherent signs; the eigenvector
/// of the normalized Laplacian's null eigenvalue is the canonical match.
int perron_column(const Mat& basis);

struct SweepRow {
  double epsilon = 0.0;
  double objective_l1 = 0.0;
  double violation = 0.0;
  bool feasible = false;
  int iterations = 0;
  Mat s;
};

struct SweepOptions {
  int scan_iters = 3000;
  int polish_iters = 15000;
  double feas_tol = 1e-5;
  /// Stop at the smallest feasible epsilon (benchmark mode) instead of solving
  /// the entire grid.
  bool stop_at_first_feasible = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int smallest_feasible_index = -1;  // -1 when nothing in the grid was feasible
};

/// Runs recover_shift across a monotone epsilon grid with warm starts: a capped
/// scan per grid point, then a long polish wherever the scan lands near
/// feasibility.
SweepResult epsilon_sweep(const SpectralTemplates& templates, const ConstraintSet& constraint_set,
                          const std::vector<double>& grid, const SweepOptions& sweep_options = {},
                          const RecoveryOptions& solve_options = {});

/// Entries below threshold * max|S| are treated as structural zeros.
Eigen::MatrixXi support_pattern(const Mat& s, double threshold = 1e-4);

/// Fraction of off-diagonal support decisions that differ.
double support_error(const Mat& s_est, const Mat& s_true, double threshold = 1e-4);

}  // namespace spectemp
