#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spectemp/filter_id_linear.hpp"
#include "spectemp/templates.hpp"
#include "util.hpp"

using namespace spectemp;
using testutil::frob_rel;
using testutil::randn;
using testutil::random_symmetric;

TEST_CASE("symmetric least squares recovers the filter from canonical inputs") {
  Rng rng(301);
  Mat h = random_symmetric(6, rng);
  GraphFilter est = identify_ls(Mat::Identity(6, 6), h);
  CHECK(frob_rel(est.matrix, h) < 1e-10);

  Mat x = randn(6, 6, rng);
  CHECK(frob_rel(identify_ls(x, x).matrix, Mat::Identity(6, 6)) < 1e-8);
}

TEST_CASE("symmetric least squares inverts a forward simulation exactly") {
  Rng rng(303);
  Mat h = random_symmetric(10, rng);
  Mat x = randn(10, 10, rng);
  Mat y = h * x;
  GraphFilter est = identify_ls(x, y);
  CHECK(frob_rel(est.matrix, h) < 1e-8);
  CHECK((y - est.matrix * x).norm() < 1e-8);
}

TEST_CASE("least squares rejects non-finite data and shape mismatches") {
  Rng rng(305);
  Mat x = randn(4, 3, rng), y = randn(4, 3, rng);
  Mat bad = y;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(identify_ls(x, bad), std::invalid_argument);
  CHECK_THROWS_AS(identify_ls(x, randn(4, 2, rng)), std::invalid_argument);
}

TEST_CASE("design matrix and normal equation routes agree") {
  Rng rng(307);
  for (int m : {3, 8, 15}) {
    Mat h = random_symmetric(7, rng);
    Mat x = randn(7, m, rng);
    Mat y = h * x + 0.01 * randn(7, m, rng);
    Mat a = identify_ls(x, y, LsRoute::design_matrix).matrix;
    Mat b = identify_ls(x, y, LsRoute::normal_equations).matrix;
    CHECK(frob_rel(a, b) < 1e-8);
  }
}

TEST_CASE("symmetric fit beats the symmetrized unconstrained fit in residual") {
  Rng rng(309);
  Mat h = random_symmetric(8, rng);
  Mat x = randn(8, 20, rng);
  Mat y = h * x + 0.1 * randn(8, 20, rng);
  Mat sym_fit = identify_ls(x, y).matrix;
  Mat asym_projected = sym(identify_ls_asymmetric(x, y).matrix);
  CHECK((y - sym_fit * x).norm() <= (y - asym_projected * x).norm() + 1e-12);
}

TEST_CASE("asymmetric baseline recovers an asymmetric map") {
  Rng rng(311);
  Mat h = randn(5, 5, rng);
  Mat x = randn(5, 9, rng);
  GraphFilter est = identify_ls_asymmetric(x, h * x);
  CHECK(frob_rel(est.matrix, h) < 1e-10);
}

TEST_CASE("design matrix realizes the half-vectorized forward map") {
  Rng rng(313);
  Mat h = random_symmetric(5, rng);
  Mat x = randn(5, 4, rng);
  Mat d = ls_design_matrix(x);
  REQUIRE(d.rows() == 20);
  REQUIRE(d.cols() == 15);
  Mat y = h * x;
  Vec yvec = Eigen::Map<Vec>(y.data(), y.size());
  CHECK((d * vech(h) - yvec).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rank bound fixtures") {
  Rng rng(315);
  RankBoundReport full = rank_bound(randn(5, 5, rng));
  CHECK(full.input_rank == 5);
  CHECK(full.bound == 15);
  CHECK(full.numeric_rank == 15);

  RankBoundReport zero = rank_bound(Mat::Zero(5, 3));
  CHECK(zero.input_rank == 0);
  CHECK(zero.bound == 0);
  CHECK(zero.numeric_rank == 0);

  Mat x3 = randn(5, 3, rng) * randn(3, 7, rng);
  RankBoundReport part = rank_bound(x3);
  CHECK(part.input_rank == 3);
  CHECK(part.bound == 12);
  CHECK(part.numeric_rank <= 12);
}

TEST_CASE("rank never exceeds the bound across random widths") {
  Rng rng(317);
  std::uniform_int_distribution<int> dim(2, 8);
  for (int trial = 0; trial < 40; ++trial) {
    int n = dim(rng);
    std::uniform_int_distribution<int> width(1, n - 1);
    int mr = width(rng);
    Mat x = randn(n, mr, rng) * randn(mr, mr + 2, rng);
    RankBoundReport r = rank_bound(x);
    CHECK(r.input_rank == mr);
    CHECK(r.numeric_rank <= r.bound);
  }
}

TEST_CASE("null space basis construction passes membership and independence") {
  Rng rng(319);
  NullSpaceBasisReport one = null_space_basis_check(randn(4, 1, rng));
  CHECK(one.count == 6);
  CHECK(one.in_null_space);
  CHECK(one.independent);
  CHECK(one.pass);
  CHECK(one.max_residual < 1e-8);

  NullSpaceBasisReport fullrank = null_space_basis_check(randn(5, 5, rng));
  CHECK(fullrank.count == 0);
  CHECK(fullrank.pass);

  NullSpaceBasisReport two = null_space_basis_check(randn(5, 2, rng));
  CHECK(two.count == 6);
  CHECK(two.gram_min_eigenvalue > 0.0);
  CHECK(two.pass);
}

TEST_CASE("spectral templates order the basis and flag degeneracy") {
  GraphFilter ident{Mat::Identity(4, 4), std::nullopt, FilterKind::raw};
  SpectralTemplates flat = extract_spectral_templates(ident);
  CHECK(frob_rel(flat.basis, Mat::Identity(4, 4)) < 1e-12);
  CHECK(flat.degenerate);
  CHECK(flat.eigen_gaps.cwiseAbs().maxCoeff() < 1e-12);

  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  SpectralTemplates asc = extract_spectral_templates({d, std::nullopt, FilterKind::raw});
  CHECK(frob_rel(asc.basis, Mat::Identity(3, 3)) < 1e-12);
  CHECK_FALSE(asc.degenerate);
  CHECK(asc.values(0) == doctest::Approx(1));
  CHECK(asc.values(2) == doctest::Approx(3));
}

TEST_CASE("templates of a polynomial filter diagonalize the generating shift") {
  Rng rng(321);
  Gso s = erdos_renyi(9, 0.4, 323);
  Vec h(3);
  h << 0.9, 0.45, 0.15;
  GraphFilter f = fir_filter(s, h);
  SpectralTemplates tpl = extract_spectral_templates(f);
  CHECK(frob_rel(tpl.basis * tpl.basis.transpose(), Mat::Identity(9, 9)) < 1e-10);
  CHECK(offdiagonal_mass(tpl.basis, s.matrix) < 1e-8);
}
