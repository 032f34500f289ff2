#include "spectemp/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace spectemp {

namespace {

double l1_norm(const Mat& m) { return m.cwiseAbs().sum(); }

struct ViolationParts {
  double structural = 0.0;
  double ball_excess = 0.0;
};

ViolationParts measure_violation(const Mat& z, const Mat& v, double epsilon,
                                 const ConstraintSet& cs, int anchor,
                                 RecoveryDistance distance) {
  const int n = static_cast<int>(z.rows());
  ViolationParts parts;
  double structural = (z - z.transpose()).cwiseAbs().maxCoeff();
  if (cs.variant == ConstraintVariant::adjacency) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j) structural = std::max(structural, -z(i, j));
    structural = std::max(structural, z.diagonal().cwiseAbs().maxCoeff());
    structural = std::max(structural, std::abs(z.col(cs.scale_node).sum() - 1.0));
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j) structural = std::max(structural, z(i, j));
    structural = std::max(structural, (z.diagonal().array() - 1.0).abs().maxCoeff());
  }
  parts.structural = structural;

  Vec d = (v.transpose() * z * v).diagonal();
  if (anchor >= 0) d(anchor) = 0.0;
  Mat resid = z - v * d.asDiagonal() * v.transpose();
  const double dist = (distance == RecoveryDistance::frobenius)
                          ? resid.norm()
                          : eigh(sym(resid)).values.cwiseAbs().maxCoeff();
  parts.ball_excess = std::max(dist - epsilon, 0.0);
  return parts;
}

}  // namespace

int perron_column(const Mat& basis) {
  int best = 0;
  double best_score = -1.0;
  for (int k = 0; k < basis.cols(); ++k) {
    const double denom = basis.col(k).cwiseAbs().sum();
    const double score = (denom > 0.0) ? std::abs(basis.col(k).sum()) / denom : 0.0;
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

RecoveryResult recover_shift(const RecoveryProblem& problem, const RecoveryWarmStart* warm) {
  const Mat& v = problem.templates.basis;
  const int n = static_cast<int>(v.rows());
  if (n < 2) throw std::invalid_argument("recover_shift: need at least 2 nodes");
  if ((v.transpose() * v - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("recover_shift: templates must be orthonormal");
  if (problem.epsilon < 0.0) throw std::invalid_argument("recover_shift: epsilon must be >= 0");
  if (problem.objective == RecoveryObjective::linf)
    throw std::invalid_argument("recover_shift: the max-norm objective is not supported");
  const ConstraintSet& cs = problem.constraint_set;
  const RecoveryOptions& opt = problem.options;
  const bool adjacency = cs.variant == ConstraintVariant::adjacency;
  if (adjacency && (cs.scale_node < 0 || cs.scale_node >= n))
    throw std::invalid_argument("recover_shift: scale_node out of range");

  const int anchor = (!adjacency && opt.anchor_null_eigenvalue) ? perron_column(v) : -1;
  const double rho = opt.rho;
  const double t = 1.0 / rho;

  Mat z, u1, u2, u3;
  if (warm && warm->valid) {
    z = warm->z;
    u1 = warm->u1;
    u2 = warm->u2;
    u3 = warm->u3;
  } else {
    z = Mat::Zero(n, n);
    u1 = Mat::Zero(n, n);
    u2 = Mat::Zero(n, n);
    u3 = Mat::Zero(n, n);
  }

  // Scale-row projection direction for the adjacency profile (symmetric
  // representative of the linear constraint sum_j S_{j,k0} = 1).
  Mat gdir = Mat::Zero(n, n);
  double g2 = 1.0;
  if (adjacency) {
    const int k0 = cs.scale_node;
    gdir(k0, k0) = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != k0) gdir(k0, j) = gdir(j, k0) = 0.5;
    g2 = gdir.squaredNorm();
  }

  RecoveryResult res;
  res.best_violation = std::numeric_limits<double>::infinity();
  Mat zsnap = z;
  double rp = 0.0, rd = 0.0;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    // Block 1: objective prox + entrywise structure.
    Mat x1 = z - u1;
    if (problem.objective == RecoveryObjective::l1) {
      if (adjacency) {
        x1 = (x1.array() - t).cwiseMax(0.0);
      } else {
        x1 = (x1.array() + t).cwiseMin(0.0);
      }
    } else {  // squared-Frobenius objective
      x1 *= rho / (rho + 2.0);
      if (adjacency)
        x1 = x1.cwiseMax(0.0);
      else
        x1 = x1.cwiseMin(0.0);
    }
    x1.diagonal().setConstant(adjacency ? 0.0 : 1.0);

    // Block 2: symmetry (+ scale row for the adjacency profile).
    Mat x2 = sym(z - u2);
    if (adjacency) {
      const double a = (gdir.array() * x2.array()).sum();
      x2 -= ((a - 1.0) / g2) * gdir;
    }

    // Block 3: distance ball around the template span.
    Mat x3 = sym(z - u3);
    Vec d = (v.transpose() * x3 * v).diagonal();
    if (anchor >= 0) d(anchor) = 0.0;
    Mat dmat = v * d.asDiagonal() * v.transpose();
    Mat resid = x3 - dmat;
    if (problem.distance == RecoveryDistance::frobenius) {
      const double r = resid.norm();
      if (r > problem.epsilon) x3 = (r > 0.0) ? (dmat + (problem.epsilon / r) * resid).eval() : dmat;
    } else {
      SymEig re = eigh(sym(resid));
      Vec clipped = re.values.cwiseMax(-problem.epsilon).cwiseMin(problem.epsilon);
      if ((clipped - re.values).cwiseAbs().maxCoeff() > 0.0)
        x3 = dmat + re.vectors * clipped.asDiagonal() * re.vectors.transpose();
    }

    Mat znew = (x1 + u1 + x2 + u2 + x3 + u3) / 3.0;
    rp = std::sqrt((x1 - znew).squaredNorm() + (x2 - znew).squaredNorm() +
                   (x3 - znew).squaredNorm());
    rd = rho * std::sqrt(3.0) * (znew - z).norm();
    z = znew;
    u1 += x1 - z;
    u2 += x2 - z;
    u3 += x3 - z;

    const double zscale = std::max(1.0, z.norm());
    if (rp < opt.tol * zscale && rd < opt.tol * zscale) {
      res.converged = true;
      ++it;
      break;
    }
    if (opt.best_iterate_interval > 0 && (it + 1) % opt.best_iterate_interval == 0) {
      ViolationParts parts =
          measure_violation(z, v, problem.epsilon, cs, anchor, problem.distance);
      const double viol = std::max(parts.structural, parts.ball_excess);
      if (viol < res.best_violation) {
        res.best_violation = viol;
        res.best_s = z;
      }
    }
    if (opt.stall_tol > 0.0 && (it + 1) % opt.stall_window == 0) {
      const double dz = (z - zsnap).norm() / std::max(1.0, z.norm());
      zsnap = z;
      if (dz < opt.stall_tol) {
        res.stalled = true;
        ++it;
        break;
      }
    }
  }

  res.iterations = it;
  res.primal_residual = rp;
  res.dual_residual = rd;
  res.s = z;
  ViolationParts parts = measure_violation(z, v, problem.epsilon, cs, anchor, problem.distance);
  res.violation = std::max(parts.structural, parts.ball_excess);
  if (res.violation <= res.best_violation) {
    res.best_violation = res.violation;
    res.best_s = z;
  }
  res.feasible = res.violation < opt.feas_tol;
  Vec d = (v.transpose() * z * v).diagonal();
  if (anchor >= 0) d(anchor) = 0.0;
  res.lambda = d;
  res.distance = (z - v * d.asDiagonal() * v.transpose()).norm();
  res.objective_l1 = l1_norm(z);
  res.warm = RecoveryWarmStart{z, u1, u2, u3, true};
  return res;
}

RecoveryResult recover_shift_laplacian(const SpectralTemplates& templates, double epsilon,
                                       const RecoveryOptions& options) {
  RecoveryProblem problem;
  problem.templates = templates;
  problem.epsilon = epsilon;
  problem.constraint_set.variant = ConstraintVariant::normalized_laplacian;
  problem.options = options;
  return recover_shift(problem);
}

SweepResult epsilon_sweep(const SpectralTemplates& templates, const ConstraintSet& constraint_set,
                          const std::vector<double>& grid, const SweepOptions& sweep_options,
                          const RecoveryOptions& solve_options) {
  if (grid.empty()) throw std::invalid_argument("epsilon_sweep: empty grid");
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i + 1] <= grid[i])
      throw std::invalid_argument("epsilon_sweep: grid must be strictly increasing");
  if (grid.front() < 0.0) throw std::invalid_argument("epsilon_sweep: negative epsilon");

  SweepResult out;
  RecoveryProblem problem;
  problem.templates = templates;
  problem.constraint_set = constraint_set;
  problem.options = solve_options;
  problem.options.feas_tol = sweep_options.feas_tol;
  RecoveryWarmStart warm;
  for (double eps : grid) {
    problem.epsilon = eps;
    problem.options.max_iters = sweep_options.scan_iters;
    RecoveryResult scan = recover_shift(problem, warm.valid ? &warm : nullptr);
    RecoveryResult* final = &scan;
    RecoveryResult polished;
    if (scan.violation < 10.0 * sweep_options.feas_tol && !scan.feasible) {
      problem.options.max_iters = sweep_options.polish_iters;
      polished = recover_shift(problem, &scan.warm);
      final = &polished;
    }
    warm = final->warm;
    SweepRow row;
    row.epsilon = eps;
    row.objective_l1 = final->objective_l1;
    row.violation = final->violation;
    row.feasible = final->violation < sweep_options.feas_tol;
    row.iterations = scan.iterations + (final == &polished ? polished.iterations : 0);
    row.s = final->s;
    out.rows.push_back(std::move(row));
    if (out.rows.back().feasible && out.smallest_feasible_index < 0) {
      out.smallest_feasible_index = static_cast<int>(out.rows.size()) - 1;
      if (sweep_options.stop_at_first_feasible) break;
    }
  }
  return out;
}

Eigen::MatrixXi support_pattern(const Mat& s, double threshold) {
  const double cut = threshold * s.cwiseAbs().maxCoeff();
  Eigen::MatrixXi pat(s.rows(), s.cols());
  for (int j = 0; j < s.cols(); ++j)
    for (int i = 0; i < s.rows(); ++i) pat(i, j) = (std::abs(s(i, j)) > cut) ? 1 : 0;
  return pat;
}

double support_error(const Mat& s_est, const Mat& s_true, double threshold) {
  if (s_est.rows() != s_true.rows() || s_est.cols() != s_true.cols())
    throw std::invalid_argument("support_error: shape mismatch");
  Eigen::MatrixXi a = support_pattern(s_est, threshold);
  Eigen::MatrixXi b = support_pattern(s_true, threshold);
  int wrong = 0, total = 0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (i != j) {
        ++total;
        if (a(i, j) != b(i, j)) ++wrong;
      }
  return total ? static_cast<double>(wrong) / total : 0.0;
}

}  // namespace spectemp
