#pragma once

#include <functional>
#include <vector>

#include "spectemp/diffusion.hpp"
#include "spectemp/linalg.hpp"

namespace spectemp {

/// Mean observation pair (mu_y_hat, mu_x) for the combined first/second moment cost.
struct MeanPair {
  Vec mu_y;
  Vec mu_x;
};

struct PgdConfig {
  double eta = 0.0;  // initial gradient step; 0 selects a Lipschitz-based default
  double mu = 1e-4;
  double beta = 0.5;
  double delta = 1e-8;
  int restarts = 10;
  int max_iters = 10000;
  /// Barzilai-Borwein adaptive step (default). false keeps the fixed initial
  /// step with Armijo backtracking only.
  bool bb = true;
  double nu = 0.0;  // weight of the mean-matching term
  /// Non-empty: restart 0 starts here (symmetrized) instead of at a random draw.
  Mat init;
};

struct PgdResult {
  GraphFilter filter;
  double objective = 0.0;
  std::vector<double> objective_trace;  // best run, one value per iteration
  int iterations_total = 0;
  int best_restart = -1;
  bool armijo_failure = false;
  bool converged = false;  // best run hit the step tolerance before max_iters
};

/// epsilon(H) = sum_m ||C_y,m - H C_x,m H^T||_F^2 and its gradient
/// 4 sum_m (H C_x H^T H C_x - C_y H C_x).
std::pair<double, Mat> pgd_objective_and_gradient(const Mat& h,
                                                  const std::vector<CovariancePair>& pairs);

/// Projected gradient descent over symmetric matrices with Armijo line search,
/// best result over random restarts. An optional score function overrides the
/// default min-objective restart selection (lower score wins).
PgdResult pgd_identify(const std::vector<CovariancePair>& pairs, const PgdConfig& config,
                       std::uint64_t seed,
                       const std::function<double(const GraphFilter&)>& score = nullptr);

/// PGD on the combined cost nu * sum_m ||mu_y,m - H mu_x,m||^2 + epsilon(H).
/// nu = 0 (or no means) reproduces pgd_identify exactly.
PgdResult pgd_identify_combined(const std::vector<CovariancePair>& pairs,
                                const std::vector<MeanPair>& means, double nu,
                                const PgdConfig& config, std::uint64_t seed);

/// Sign-selection problem data for the semidefinite-relaxation pipeline.
struct BqpProblem {
  std::vector<Mat> a_mats;       // per-process N^2 x N candidate maps
  std::vector<Mat> iroot_cx;     // C_x,m^{-1/2}
  std::vector<Mat> root_cxyx;    // (C_x^{1/2} C_y C_x^{1/2})^{1/2}
  std::vector<Mat> v_xyx;        // eigenvectors of C_xyx,m
  Mat psi;                       // N^2(M-1) x NM block-bidiagonal stack
  Mat gram;                      // W = Psi^T Psi
  int n = 0;
  int m = 0;
  double min_eigen_gap = 0.0;    // smallest C_xyx eigen gap across processes
};

/// Assembles the sign-consistency data from M >= 2 covariance pairs.
BqpProblem build_bqp(const std::vector<CovariancePair>& pairs);

/// Residual of the sign-consistency identity A_m b_m = vec(H) at the true
/// filter: max_m min_{b_m} ||A_m b_m - vec(H)||, signs chosen by projection.
/// Diagnostic for exact-data setups.
double bqp_sign_consistency(const BqpProblem& problem, const Mat& h_true);

struct SdpConfig {
  double rho = 0.0;  // 0 selects max|W| as the initial penalty
  double tol = 1e-6;
  int max_iters = 50000;
  int dim_cap = 600;
};

struct SdpResult {
  Mat b_star;
  double objective = 0.0;
  double objective_gap = 0.0;  // |tr(W B) - tr(W Z)| split-consistency certificate
  int iterations = 0;
  bool converged = false;
};

/// First-order splitting solver for min tr(WB) s.t. B PSD, diag(B) = 1.
/// Penalty self-tunes by residual balancing; non-convergence at the iteration
/// cap is flagged, not thrown.
SdpResult solve_sdp(const Mat& w, const SdpConfig& config = {});

struct RoundingResult {
  Vec signs;
  double objective = 0.0;
};

/// Gaussian randomization: draws L vectors with covariance B, rounds each to
/// signs (sgn(0) := +1), returns the one with the smallest quadratic form.
RoundingResult randomize_round(const Mat& b_star, const Mat& w, int draws, std::uint64_t seed);

/// Averaged filter reconstruction from a stacked sign vector, trace-positive
/// canonicalized.
GraphFilter filter_from_signs(const Vec& signs, const BqpProblem& problem);

struct SdrResult {
  GraphFilter filter;
  double sdp_objective = 0.0;
  double rounding_objective = 0.0;
  double residual_eps = 0.0;
  int sdp_iterations = 0;
  bool sdp_converged = false;
};

/// Full semidefinite-relaxation pipeline: build_bqp, solve_sdp, randomize_round,
/// filter_from_signs. Requires M >= 2.
SdrResult sdr_identify(const std::vector<CovariancePair>& pairs, int draws, std::uint64_t seed,
                       const SdpConfig& sdp_config = {});

struct EnumerationResult {
  std::vector<Mat> solutions;
  std::vector<Vec> signs;
};

/// Enumerates all 2^N sign candidates of the first process's quadratic relation
/// and keeps those satisfying every other process within tol (relative
/// Frobenius). Exact-covariance oracle; N <= 14.
EnumerationResult enumerate_symmetric_solutions(const std::vector<CovariancePair>& pairs,
                                                double tol = 1e-6);

/// Flips the filter sign so the trace is nonnegative (largest-|entry| positive
/// when the trace is negligible).
Mat canonicalize_sign(const Mat& h);

/// Exhaustive minimum of b^T W b over {-1,+1}^dim; oracle for the relaxation.
/// dim <= 24.
RoundingResult brute_force_bqp(const Mat& w);

}  // namespace spectemp
