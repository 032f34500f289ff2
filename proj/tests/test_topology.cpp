#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spectemp/topology.hpp"
#include "util.hpp"

using namespace spectemp;
using testutil::frob_rel;
using testutil::randn;

namespace {

RecoveryProblem adjacency_problem(const SpectralTemplates& tpl, double epsilon) {
  RecoveryProblem p;
  p.templates = tpl;
  p.epsilon = epsilon;
  p.constraint_set = {ConstraintVariant::adjacency, 0};
  return p;
}

SpectralTemplates perturbed_templates(const Mat& s, double scale, std::uint64_t seed) {
  Rng rng(seed);
  Mat basis = eigh(s).vectors + scale * randn(static_cast<int>(s.rows()),
                                              static_cast<int>(s.cols()), rng);
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ();
  return templates_from_matrix(sym(q * eigh(s).values.asDiagonal() * q.transpose()));
}

}  // namespace

TEST_CASE("exact adjacency templates recover the graph at zero radius") {
  Gso g = erdos_renyi(12, 0.35, 601);
  Mat s_true = normalize_scale(g.matrix, 0);
  SpectralTemplates tpl = templates_from_matrix(s_true);

  RecoveryResult res = recover_shift(adjacency_problem(tpl, 0.0));
  CHECK(res.feasible);
  CHECK(recovery_error(res.s, s_true) < 1e-4);
  CHECK(validate(Gso{res.s, GsoKind::adjacency}, {ConstraintVariant::adjacency, 0}, 1e-6).pass);
  CHECK(support_error(res.s, s_true) == 0.0);
  CHECK((support_pattern(res.s) - support_pattern(s_true)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("identity templates admit no connected adjacency") {
  SpectralTemplates tpl = templates_from_matrix(Mat(Vec::LinSpaced(8, 1.0, 8.0).asDiagonal()));
  RecoveryProblem p = adjacency_problem(tpl, 0.0);
  p.options.max_iters = 4000;
  RecoveryResult res = recover_shift(p);
  CHECK_FALSE(res.feasible);
  CHECK(res.violation > 1e-3);
  CHECK(res.best_violation <= res.violation + 1e-12);
}

TEST_CASE("a radius the size of the graph makes any basis feasible") {
  Gso g = erdos_renyi(9, 0.4, 603);
  Mat s_true = normalize_scale(g.matrix, 0);
  Rng rng(605);
  Eigen::HouseholderQR<Mat> qr(randn(9, 9, rng));
  SpectralTemplates tpl;
  tpl.basis = qr.householderQ();
  tpl.values = Vec::LinSpaced(9, -1.0, 1.0);
  tpl.eigen_gaps = Vec::Constant(8, 0.25);

  RecoveryProblem p = adjacency_problem(tpl, s_true.norm());
  RecoveryResult res = recover_shift(p);
  CHECK(res.feasible);
  CHECK(res.objective_l1 <= s_true.cwiseAbs().sum() + 1e-4);
}

TEST_CASE("solver input validation") {
  Gso g = erdos_renyi(6, 0.5, 607);
  SpectralTemplates tpl = templates_from_matrix(normalize_scale(g.matrix, 0));

  RecoveryProblem p = adjacency_problem(tpl, -0.1);
  CHECK_THROWS_AS(recover_shift(p), std::invalid_argument);

  p = adjacency_problem(tpl, 0.0);
  p.objective = RecoveryObjective::linf;
  CHECK_THROWS_AS(recover_shift(p), std::invalid_argument);

  p = adjacency_problem(tpl, 0.0);
  p.templates.basis *= 1.3;
  CHECK_THROWS_AS(recover_shift(p), std::invalid_argument);

  p = adjacency_problem(tpl, 0.0);
  p.constraint_set.scale_node = 17;
  CHECK_THROWS_AS(recover_shift(p), std::invalid_argument);
}

TEST_CASE("laplacian profile recovers the karate laplacian from exact templates") {
  Gso karate = load_edge_list("data/karate.edges");
  Mat ln = normalized_laplacian(karate.matrix);
  SpectralTemplates tpl = templates_from_matrix(ln);

  RecoveryResult res = recover_shift_laplacian(tpl, 0.0);
  CHECK(res.feasible);
  CHECK(recovery_error(res.s, ln) < 1e-3);

  SpectralTemplates ident = templates_from_matrix(Mat(Vec::LinSpaced(8, 1.0, 8.0).asDiagonal()));
  RecoveryOptions quick;
  quick.max_iters = 4000;
  RecoveryResult bad = recover_shift_laplacian(ident, 0.0, quick);
  CHECK_FALSE(bad.feasible);
}

TEST_CASE("perron column flags the coherent-sign template") {
  Gso karate = load_edge_list("data/karate.edges");
  Mat ln = normalized_laplacian(karate.matrix);
  SymEig e = eigh(ln);
  CHECK(perron_column(e.vectors) == 0);
}

TEST_CASE("objective is monotone in the radius") {
  Gso g = erdos_renyi(10, 0.4, 609);
  Mat s_true = normalize_scale(g.matrix, 0);
  SpectralTemplates tpl = perturbed_templates(s_true, 0.02, 611);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.3, 0.6, 1.0}) {
    RecoveryProblem p = adjacency_problem(tpl, eps);
    p.options.max_iters = 20000;
    RecoveryResult res = recover_shift(p);
    REQUIRE(res.feasible);
    CHECK(res.objective_l1 <= prev + 1e-5);
    prev = res.objective_l1;
  }
}

TEST_CASE("solution tracks a joint permutation of templates and anchor") {
  Gso g = erdos_renyi(8, 0.45, 613);
  Mat s_true = normalize_scale(g.matrix, 0);
  SpectralTemplates tpl = templates_from_matrix(s_true);
  RecoveryResult base = recover_shift(adjacency_problem(tpl, 0.0));
  REQUIRE(base.feasible);

  std::vector<int> perm = {3, 1, 7, 0, 5, 2, 6, 4};
  Mat p = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) p(perm[i], i) = 1.0;

  SpectralTemplates ptpl = tpl;
  ptpl.basis = p * tpl.basis;
  RecoveryProblem prob = adjacency_problem(ptpl, 0.0);
  prob.constraint_set.scale_node = perm[0];
  RecoveryResult moved = recover_shift(prob);
  REQUIRE(moved.feasible);
  CHECK(frob_rel(moved.s, p * base.s * p.transpose()) < 1e-3);
}

TEST_CASE("spectral-distance ball accepts the exact instance") {
  Gso g = erdos_renyi(9, 0.4, 615);
  Mat s_true = normalize_scale(g.matrix, 0);
  RecoveryProblem p = adjacency_problem(templates_from_matrix(s_true), 0.0);
  p.distance = RecoveryDistance::spectral;
  RecoveryResult res = recover_shift(p);
  CHECK(res.feasible);
  CHECK(recovery_error(res.s, s_true) < 1e-3);
}

TEST_CASE("stall detection stops hopeless solves early") {
  SpectralTemplates tpl = templates_from_matrix(Mat(Vec::LinSpaced(10, 1.0, 10.0).asDiagonal()));
  RecoveryProblem p = adjacency_problem(tpl, 0.0);
  p.options.max_iters = 50000;
  p.options.stall_tol = 1e-6;
  RecoveryResult res = recover_shift(p);
  CHECK(res.stalled);
  CHECK(res.iterations < 50000);
  CHECK_FALSE(res.feasible);
}

TEST_CASE("warm starts resume a previous solve") {
  Gso g = erdos_renyi(10, 0.4, 617);
  Mat s_true = normalize_scale(g.matrix, 0);
  SpectralTemplates tpl = perturbed_templates(s_true, 0.01, 619);
  RecoveryProblem p = adjacency_problem(tpl, 0.5);
  p.options.max_iters = 6000;
  RecoveryResult cold = recover_shift(p);
  REQUIRE(cold.warm.valid);
  RecoveryResult resumed = recover_shift(p, &cold.warm);
  CHECK(resumed.iterations <= cold.iterations);
  CHECK(resumed.feasible == cold.feasible);
}

TEST_CASE("epsilon sweep reports the exact-template threshold at zero") {
  Gso g = erdos_renyi(10, 0.4, 621);
  Mat s_true = normalize_scale(g.matrix, 0);
  SpectralTemplates tpl = templates_from_matrix(s_true);
  std::vector<double> grid = {0.0, 0.05, 0.2};
  SweepResult sweep = epsilon_sweep(tpl, {ConstraintVariant::adjacency, 0}, grid);
  REQUIRE(sweep.rows.size() == 3);
  CHECK(sweep.smallest_feasible_index == 0);
  CHECK(recovery_error(sweep.rows[0].s, s_true) < 1e-3);
}

TEST_CASE("epsilon sweep locates a positive threshold for perturbed templates") {
  Gso g = erdos_renyi(12, 0.35, 623);
  Mat s_true = normalize_scale(g.matrix, 0);
  SpectralTemplates tpl = perturbed_templates(s_true, 0.03, 625);
  std::vector<double> grid = {0.0, 0.01, 0.05, 0.15, 0.4, 0.9};
  SweepOptions opts;
  SweepResult sweep = epsilon_sweep(tpl, {ConstraintVariant::adjacency, 0}, grid, opts);
  REQUIRE(sweep.smallest_feasible_index >= 0);
  CHECK(sweep.smallest_feasible_index > 0);
  for (int i = 0; i < static_cast<int>(sweep.rows.size()); ++i)
    CHECK(sweep.rows[i].epsilon == grid[i]);
}

TEST_CASE("epsilon sweep rejects malformed grids") {
  Gso g = erdos_renyi(6, 0.5, 627);
  SpectralTemplates tpl = templates_from_matrix(normalize_scale(g.matrix, 0));
  ConstraintSet cs{ConstraintVariant::adjacency, 0};
  CHECK_THROWS_AS(epsilon_sweep(tpl, cs, {}), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_sweep(tpl, cs, {0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_sweep(tpl, cs, {0.2, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_sweep(tpl, cs, {-0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("support utilities threshold small magnitudes") {
  Mat s(3, 3);
  s << 0, 1.0, 1e-7, 1.0, 0, 0.5, 1e-7, 0.5, 0;
  Eigen::MatrixXi pat = support_pattern(s, 1e-4);
  CHECK(pat(0, 1) == 1);
  CHECK(pat(0, 2) == 0);
  CHECK(pat.diagonal().sum() == 0);

  Mat t = s;
  CHECK(support_error(s, t) == 0.0);
  t(0, 2) = t(2, 0) = 0.3;
  CHECK(support_error(s, t) == doctest::Approx(2.0 / 6.0));
}
