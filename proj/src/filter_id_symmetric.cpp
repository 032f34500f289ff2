#include "spectemp/filter_id_symmetric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spectemp {

namespace {

double combined_objective(const Mat& h, const std::vector<CovariancePair>& pairs,
                          const std::vector<MeanPair>& means, double nu) {
  double f = 0.0;
  for (const auto& p : pairs) f += (p.c_y_hat - h * p.c_x * h.transpose()).squaredNorm();
  if (nu != 0.0)
    for (const auto& mp : means) f += nu * (mp.mu_y - h * mp.mu_x).squaredNorm();
  return f;
}

Mat combined_gradient(const Mat& h, const std::vector<CovariancePair>& pairs,
                      const std::vector<MeanPair>& means, double nu) {
  Mat g = Mat::Zero(h.rows(), h.cols());
  for (const auto& p : pairs) {
    Mat hc = h * p.c_x;
    g += hc * h.transpose() * hc - p.c_y_hat * hc;
  }
  g *= 4.0;
  if (nu != 0.0)
    for (const auto& mp : means) g += (2.0 * nu) * (h * mp.mu_x - mp.mu_y) * mp.mu_x.transpose();
  return g;
}

struct RunOutcome {
  Mat h;
  double objective = 0.0;
  std::vector<double> trace;
  int iterations = 0;
  bool armijo_failure = false;
  bool converged = false;
};

RunOutcome pgd_run(const Mat& h0, const std::vector<CovariancePair>& pairs,
                   const std::vector<MeanPair>& means, double nu, double eta0,
                   const PgdConfig& cfg) {
  RunOutcome out;
  Mat h = h0;
  double f = combined_objective(h, pairs, means, nu);
  Mat g = combined_gradient(h, pairs, means, nu);
  double eta = eta0;
  out.trace.push_back(f);
  for (int k = 0; k < cfg.max_iters; ++k) {
    Mat gs = sym(g);
    Mat d = -eta * gs;  // projected step direction: sym(H - eta g) - H
    if (d.norm() <= cfg.delta) {
      out.converged = true;
      break;
    }
    double gd = (g.array() * d.array()).sum();
    if (gd > 0.0) {  // step too long for descent; shrink and retry
      eta *= 0.1;
      ++out.iterations;
      continue;
    }
    double alpha = 1.0;
    double fnew = 0.0;
    bool accepted = false;
    for (int mk = 0; mk <= 60; ++mk) {
      fnew = combined_objective(h + alpha * d, pairs, means, nu);
      if (f - fnew >= -cfg.mu * alpha * gd) {
        accepted = true;
        break;
      }
      alpha *= cfg.beta;
    }
    if (!accepted) {
      out.armijo_failure = true;
      break;
    }
    Mat hn = h + alpha * d;
    Mat gn = combined_gradient(hn, pairs, means, nu);
    if (cfg.bb) {
      Mat dh = hn - h;
      Mat dg = sym(gn) - gs;
      const double denom = (dh.array() * dg.array()).sum();
      if (denom > 1e-300)
        eta = std::min(std::max(dh.squaredNorm() / denom, 1e-12), 1e6);
    }
    const double step = (hn - h).norm();
    h = hn;
    g = gn;
    f = fnew;
    out.trace.push_back(f);
    ++out.iterations;
    if (step <= cfg.delta) {
      out.converged = true;
      break;
    }
  }
  out.h = h;
  out.objective = f;
  return out;
}

PgdResult pgd_best_of_restarts(const std::vector<CovariancePair>& pairs,
                               const std::vector<MeanPair>& means, double nu,
                               const PgdConfig& cfg, std::uint64_t seed,
                               const std::function<double(const GraphFilter&)>& score) {
  if (pairs.empty()) throw std::invalid_argument("pgd_identify: no covariance pairs");
  if (cfg.restarts < 1 || cfg.max_iters < 1 || cfg.mu <= 0.0 || cfg.mu >= 1.0 ||
      cfg.beta <= 0.0 || cfg.beta >= 1.0 || cfg.delta <= 0.0)
    throw std::invalid_argument("pgd_identify: invalid configuration");
  const int n = pairs.front().n();

  double trace_ratio = 0.0;
  double lip = 0.0;
  {
    double lam_c2 = 0.0, lam_cy = 0.0;
    for (const auto& p : pairs) {
      const double tc = p.c_x.trace();
      const double ty = p.c_y_hat.trace();
      trace_ratio += (tc > 0.0) ? ty / tc : 1.0;
      const double lc = eigh(p.c_x).values.maxCoeff();
      const double ly = eigh(p.c_y_hat).values.maxCoeff();
      lam_c2 += lc * lc;
      lam_cy += lc * ly;
    }
    trace_ratio = std::sqrt(trace_ratio / static_cast<double>(pairs.size()));
    lip = 12.0 * lam_c2 * trace_ratio * trace_ratio + 4.0 * lam_cy;
  }
  const double eta0 = (cfg.eta > 0.0) ? cfg.eta : (lip > 0.0 ? 1.0 / lip : 1e-3);

  PgdResult best;
  double best_score = std::numeric_limits<double>::infinity();
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(seed + 0x51ed2701ULL * static_cast<std::uint64_t>(r + 1));
    Mat h0(n, n);
    if (r == 0 && cfg.init.size() > 0) {
      if (cfg.init.rows() != n || cfg.init.cols() != n)
        throw std::invalid_argument("pgd_identify: init shape mismatch");
      h0 = sym(cfg.init);
    } else {
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) h0(i, j) = gauss(rng);
      h0 = sym(h0) * (trace_ratio / std::sqrt(static_cast<double>(n)));
    }
    RunOutcome run = pgd_run(h0, pairs, means, nu, eta0, cfg);
    GraphFilter cand;
    // Mean terms pin the global sign; canonicalize only when it is ambiguous.
    const bool sign_free = means.empty() || nu == 0.0;
    cand.matrix = sign_free ? canonicalize_sign(run.h) : sym(run.h);
    cand.kind = FilterKind::raw;
    const double s = score ? score(cand) : run.objective;
    best.iterations_total += run.iterations;
    if (run.armijo_failure) best.armijo_failure = true;
    if (s < best_score) {
      best_score = s;
      best.filter = cand;
      best.objective = run.objective;
      best.objective_trace = run.trace;
      best.best_restart = r;
      best.converged = run.converged;
    }
  }
  return best;
}

}  // namespace

std::pair<double, Mat> pgd_objective_and_gradient(const Mat& h,
                                                  const std::vector<CovariancePair>& pairs) {
  return {combined_objective(h, pairs, {}, 0.0), combined_gradient(h, pairs, {}, 0.0)};
}

PgdResult pgd_identify(const std::vector<CovariancePair>& pairs, const PgdConfig& config,
                       std::uint64_t seed,
                       const std::function<double(const GraphFilter&)>& score) {
  return pgd_best_of_restarts(pairs, {}, 0.0, config, seed, score);
}

PgdResult pgd_identify_combined(const std::vector<CovariancePair>& pairs,
                                const std::vector<MeanPair>& means, double nu,
                                const PgdConfig& config, std::uint64_t seed) {
  if (nu < 0.0) throw std::invalid_argument("pgd_identify_combined: nu must be nonnegative");
  return pgd_best_of_restarts(pairs, means, nu, config, seed, nullptr);
}

Mat canonicalize_sign(const Mat& h) {
  const double tr = h.trace();
  if (std::abs(tr) > 1e-12) return (tr >= 0.0) ? h : -h;
  int imax = 0, jmax = 0;
  h.cwiseAbs().maxCoeff(&imax, &jmax);
  return (h(imax, jmax) >= 0.0) ? h : -h;
}

BqpProblem build_bqp(const std::vector<CovariancePair>& pairs) {
  const int m = static_cast<int>(pairs.size());
  if (m < 2) throw std::invalid_argument("build_bqp: need at least 2 processes");
  const int n = pairs.front().n();
  BqpProblem prob;
  prob.n = n;
  prob.m = m;
  prob.min_eigen_gap = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) {
    if (p.n() != n) throw std::invalid_argument("build_bqp: inconsistent dimensions");
    Mat root = principal_sqrt(p.c_x);
    Mat iroot = inverse_sqrt(p.c_x);
    SymEig e = eigh(sym(root * p.c_y_hat * root));
    for (int i = 0; i + 1 < n; ++i)
      prob.min_eigen_gap = std::min(prob.min_eigen_gap, e.values(i + 1) - e.values(i));
    Mat root_cxyx = matmap(e, [](double l) { return std::sqrt(std::max(l, 0.0)); });
    prob.a_mats.push_back(khatri_rao(iroot * e.vectors, iroot * root_cxyx * e.vectors));
    prob.iroot_cx.push_back(iroot);
    prob.root_cxyx.push_back(root_cxyx);
    prob.v_xyx.push_back(e.vectors);
  }
  prob.psi = Mat::Zero(n * n * (m - 1), n * m);
  for (int k = 0; k + 1 < m; ++k) {
    prob.psi.block(k * n * n, k * n, n * n, n) = prob.a_mats[k];
    prob.psi.block(k * n * n, (k + 1) * n, n * n, n) = -prob.a_mats[k + 1];
  }
  prob.gram = prob.psi.transpose() * prob.psi;
  return prob;
}

double bqp_sign_consistency(const BqpProblem& problem, const Mat& h_true) {
  Vec vec_h = Eigen::Map<const Vec>(h_true.data(), h_true.size());
  double worst = 0.0;
  for (const auto& a : problem.a_mats) {
    Vec proj = a.transpose() * vec_h;
    Vec b(problem.n);
    for (int i = 0; i < problem.n; ++i) b(i) = (proj(i) >= 0.0) ? 1.0 : -1.0;
    worst = std::max(worst, (a * b - vec_h).norm());
  }
  return worst;
}

SdpResult solve_sdp(const Mat& w, const SdpConfig& config) {
  const int nm = static_cast<int>(w.rows());
  if (w.cols() != nm) throw std::invalid_argument("solve_sdp: W must be square");
  if (nm > config.dim_cap)
    throw std::invalid_argument("solve_sdp: dimension exceeds configured cap");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + w.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("solve_sdp: W must be symmetric");
  {
    const double lmin = eigh(w).values.minCoeff();
    if (lmin < -1e-6 * std::max(1.0, w.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("solve_sdp: W must be positive semidefinite");
  }

  double rho = (config.rho > 0.0) ? config.rho : std::max(w.cwiseAbs().maxCoeff(), 1e-8);
  Mat z = Mat::Identity(nm, nm);
  Mat u = Mat::Zero(nm, nm);
  Mat b = z;
  SdpResult res;
  for (int it = 0; it < config.max_iters; ++it) {
    b = z - u - w / rho;
    b.diagonal().setOnes();
    Mat zn = psd_project(sym(b + u));
    const double rp = (b - zn).norm();
    const double rd = rho * (zn - z).norm();
    z = zn;
    u += b - z;
    res.iterations = it + 1;
    if (rp < config.tol && rd < config.tol) {
      res.converged = true;
      break;
    }
    if ((it + 1) % 25 == 0) {
      if (rp > 10.0 * rd) {
        rho *= 2.0;
        u /= 2.0;
      } else if (rd > 10.0 * rp) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  res.b_star = sym(0.5 * (b + z));
  res.objective = (w.array() * res.b_star.array()).sum();
  res.objective_gap =
      std::abs((w.array() * (b - z).array()).sum()) / std::max(1.0, std::abs(res.objective));
  return res;
}

RoundingResult randomize_round(const Mat& b_star, const Mat& w, int draws, std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("randomize_round: need at least one draw");
  const int nm = static_cast<int>(b_star.rows());
  SymEig e = eigh(b_star);
  Mat factor = e.vectors;
  for (int k = 0; k < nm; ++k) factor.col(k) *= std::sqrt(std::max(e.values(k), 0.0));
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RoundingResult best;
  best.objective = std::numeric_limits<double>::infinity();
  Vec g(nm), b(nm);
  for (int l = 0; l < draws; ++l) {
    for (int i = 0; i < nm; ++i) g(i) = gauss(rng);
    Vec zvec = factor * g;
    for (int i = 0; i < nm; ++i) b(i) = (zvec(i) >= 0.0) ? 1.0 : -1.0;
    const double val = b.dot(w * b);
    if (val < best.objective) {
      best.objective = val;
      best.signs = b;
    }
  }
  return best;
}

GraphFilter filter_from_signs(const Vec& signs, const BqpProblem& problem) {
  if (signs.size() != static_cast<long>(problem.n) * problem.m)
    throw std::invalid_argument("filter_from_signs: sign vector length mismatch");
  for (int i = 0; i < signs.size(); ++i)
    if (std::abs(std::abs(signs(i)) - 1.0) > 1e-12)
      throw std::invalid_argument("filter_from_signs: entries must be +1 or -1");
  const int n = problem.n;
  Mat h = Mat::Zero(n, n);
  for (int m = 0; m < problem.m; ++m) {
    Mat vb = problem.v_xyx[m];
    for (int k = 0; k < n; ++k) vb.col(k) *= signs(m * n + k);
    h += problem.iroot_cx[m] * problem.root_cxyx[m] * vb * problem.v_xyx[m].transpose() *
         problem.iroot_cx[m];
  }
  GraphFilter f;
  f.matrix = canonicalize_sign(sym(h / static_cast<double>(problem.m)));
  f.kind = FilterKind::raw;
  return f;
}

SdrResult sdr_identify(const std::vector<CovariancePair>& pairs, int draws, std::uint64_t seed,
                       const SdpConfig& sdp_config) {
  BqpProblem prob = build_bqp(pairs);
  SdpResult sdp = solve_sdp(prob.gram, sdp_config);
  RoundingResult round = randomize_round(sdp.b_star, prob.gram, draws, seed);
  SdrResult res;
  res.filter = filter_from_signs(round.signs, prob);
  res.sdp_objective = sdp.objective;
  res.rounding_objective = round.objective;
  res.sdp_iterations = sdp.iterations;
  res.sdp_converged = sdp.converged;
  res.residual_eps = pgd_objective_and_gradient(res.filter.matrix, pairs).first;
  return res;
}

RoundingResult brute_force_bqp(const Mat& w) {
  const int n = static_cast<int>(w.rows());
  if (n > 24) throw std::invalid_argument("brute_force_bqp: dimension too large to enumerate");
  RoundingResult best;
  best.objective = std::numeric_limits<double>::infinity();
  Vec b(n);
  for (long mask = 0; mask < (1L << n); ++mask) {
    for (int i = 0; i < n; ++i) b(i) = ((mask >> i) & 1) ? -1.0 : 1.0;
    const double val = b.dot(w * b);
    if (val < best.objective) {
      best.objective = val;
      best.signs = b;
    }
  }
  return best;
}

EnumerationResult enumerate_symmetric_solutions(const std::vector<CovariancePair>& pairs,
                                                double tol) {
  if (pairs.empty()) throw std::invalid_argument("enumerate_symmetric_solutions: no pairs");
  const int n = pairs.front().n();
  if (n > 14)
    throw std::invalid_argument("enumerate_symmetric_solutions: N > 14 is not enumerable");
  Mat root = principal_sqrt(pairs.front().c_x);
  Mat iroot = inverse_sqrt(pairs.front().c_x);
  SymEig e = eigh(sym(root * pairs.front().c_y_hat * root));
  Mat root_cxyx = matmap(e, [](double l) { return std::sqrt(std::max(l, 0.0)); });
  Mat u = iroot * root_cxyx * e.vectors;  // columns scale-left factors
  Mat wmat = iroot * e.vectors;           // columns right factors

  EnumerationResult out;
  Vec b(n);
  for (long mask = 0; mask < (1L << n); ++mask) {
    for (int i = 0; i < n; ++i) b(i) = ((mask >> i) & 1) ? -1.0 : 1.0;
    Mat ub = u;
    for (int k = 0; k < n; ++k) ub.col(k) *= b(k);
    Mat h = ub * wmat.transpose();
    bool keep = true;
    for (size_t m = 1; m < pairs.size(); ++m) {
      const Mat& cy = pairs[m].c_y_hat;
      if ((cy - h * pairs[m].c_x * h.transpose()).norm() > tol * cy.norm()) {
        keep = false;
        break;
      }
    }
    if (keep) {
      out.solutions.push_back(h);
      out.signs.push_back(b);
    }
  }
  return out;
}

}  // namespace spectemp
