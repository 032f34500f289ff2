#pragma once

#include "spectemp/diffusion.hpp"
#include "spectemp/linalg.hpp"

namespace spectemp {

enum class LsRoute { automatic, design_matrix, normal_equations };

/// Least-squares identification of a symmetric filter from input-output pairs:
/// minimizes sum_m ||y_m - H x_m||^2 over symmetric H, solved in
/// half-vectorization coordinates. Minimum-norm solution when rank deficient.
/// The design matrix (X^T kron I) D has N*M rows; past ~1e4 rows the normal
/// equations in vech coordinates are solved instead (same minimizer).
GraphFilter identify_ls(const Mat& x, const Mat& y, LsRoute route = LsRoute::automatic);

/// Unconstrained baseline H = Y X^+ (no symmetry exploited).
GraphFilter identify_ls_asymmetric(const Mat& x, const Mat& y);

/// Design matrix (X^T kron I_N) D_N materialized explicitly.
Mat ls_design_matrix(const Mat& x);

struct RankBoundReport {
  int numeric_rank = 0;
  int bound = 0;
  int input_rank = 0;
};

/// Numeric rank of the design matrix next to the theoretical cap
/// N_H - (N - M_r + 1)(N - M_r)/2 driven by the input rank M_r.
RankBoundReport rank_bound(const Mat& x, double rank_tol = 1e-10);

struct NullSpaceBasisReport {
  int count = 0;
  double max_residual = 0.0;
  double gram_min_eigenvalue = 0.0;
  bool in_null_space = true;
  bool independent = true;
  bool pass = true;
};

/// Constructs the candidate null-space vectors D^+ (v_i kron v_j + v_j kron v_i)
/// from a basis of ker(X^T) and verifies membership in the design matrix's null
/// space plus linear independence of the collection.
NullSpaceBasisReport null_space_basis_check(const Mat& x, double tol = 1e-8);

}  // namespace spectemp
