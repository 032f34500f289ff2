#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "spectemp/filter_id_psd.hpp"
#include "util.hpp"

using namespace spectemp;
using testutil::frob_rel;
using testutil::randn;

namespace {

Mat random_psd_filter(int n, Rng& rng) {
  Mat a = randn(n, n, rng);
  return a * a.transpose() / n + 0.05 * Mat::Identity(n, n);
}

CovariancePair exact_pair(const Mat& h, const Mat& cx) {
  GraphFilter f{h, std::nullopt, FilterKind::raw};
  return {cx, propagate_covariance(f, cx), 0};
}

struct KarateData {
  GraphFilter filter;
  std::vector<Mat> cx;
  std::vector<Mat> x_full;  // standard-normal factors, one block per process
};

KarateData karate_setup(std::uint64_t seed, int m, int p_max) {
  static const Gso karate = load_edge_list("data/karate.edges");
  Rng rng(seed);
  Gso lifted = make_psd_shift(karate, 0.1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec h(2);
  h << unif(rng), unif(rng);
  KarateData data;
  data.filter = fir_filter(lifted, h);
  for (int i = 0; i < m; ++i) {
    data.cx.push_back(random_spd_covariance(34, 100.0, rng()));
    data.x_full.push_back(gaussian_signals(data.cx.back(), p_max, rng()));
  }
  return data;
}

double karate_error(const KarateData& data, int m, int p) {
  std::vector<CovariancePair> pairs;
  for (int i = 0; i < m; ++i) {
    Mat y = data.filter.matrix * data.x_full[i].leftCols(p);
    pairs.push_back({data.cx[i], sample_covariance(y), p});
  }
  PsdIdentifyResult est = identify_psd_multi(pairs);
  return frob_rel(est.filter.matrix, data.filter.matrix);
}

}  // namespace

TEST_CASE("single-process closed form on identity fixtures") {
  CHECK(frob_rel(identify_psd_single({Mat::Identity(4, 4), Mat::Identity(4, 4), 0}).matrix,
                 Mat::Identity(4, 4)) < 1e-12);

  Rng rng(401);
  Mat h = random_psd_filter(5, rng);
  GraphFilter est = identify_psd_single({Mat::Identity(5, 5), h * h, 0});
  CHECK(frob_rel(est.matrix, h) < 1e-9);
}

TEST_CASE("single-process closed form inverts exact propagation") {
  Rng rng(403);
  for (int trial = 0; trial < 10; ++trial) {
    Mat h = random_psd_filter(8, rng);
    Mat cx = random_spd_covariance(8, 50.0, rng());
    GraphFilter est = identify_psd_single(exact_pair(h, cx));
    CHECK(frob_rel(est.matrix, h) < 1e-8);
  }
}

TEST_CASE("single-process output is a fixed point of the identification map") {
  Rng rng(405);
  Mat cx = random_spd_covariance(6, 20.0, rng());
  Mat cy = sample_covariance(gaussian_signals(cx, 40, rng()));
  GraphFilter first = identify_psd_single({cx, cy, 40});
  GraphFilter second = identify_psd_single(exact_pair(first.matrix, cx));
  CHECK(frob_rel(second.matrix, first.matrix) < 1e-10);
}

TEST_CASE("single-process rejections") {
  Mat singular = Mat::Zero(3, 3);
  singular(0, 0) = singular(1, 1) = 1.0;
  CHECK_THROWS_WITH_AS(identify_psd_single({singular, Mat::Identity(3, 3), 0}),
                       doctest::Contains("condition"), std::invalid_argument);
  CHECK_THROWS_AS(identify_psd_single({Mat::Identity(3, 3), -Mat::Identity(3, 3), 0}),
                  std::invalid_argument);
}

TEST_CASE("multi-process solver agrees with the closed form at one pair") {
  Rng rng(407);
  Mat h = random_psd_filter(7, rng);
  Mat cx = random_spd_covariance(7, 30.0, rng());
  CovariancePair pair = exact_pair(h, cx);
  Mat single = identify_psd_single(pair).matrix;
  PsdIdentifyResult multi = identify_psd_multi({pair});
  CHECK(frob_rel(multi.filter.matrix, single) < 1e-8);
}

TEST_CASE("multi-process solver is exact on consistent exact pairs") {
  Rng rng(409);
  Mat h = random_psd_filter(9, rng);
  std::vector<CovariancePair> pairs;
  for (int m = 0; m < 3; ++m)
    pairs.push_back(exact_pair(h, random_spd_covariance(9, 40.0, rng())));
  PsdIdentifyResult est = identify_psd_multi(pairs);
  CHECK(frob_rel(est.filter.matrix, h) < 1e-8);
  CHECK(est.pre_projection_deviation < 1e-8);
  CHECK_FALSE(est.rank_deficient_input);
}

TEST_CASE("multi-process flags rank-deficient sample covariances") {
  Rng rng(411);
  Mat h = random_psd_filter(10, rng);
  Mat cx = random_spd_covariance(10, 10.0, rng());
  Mat y = h * gaussian_signals(cx, 4, rng());
  PsdIdentifyResult est = identify_psd_multi({{cx, sample_covariance(y), 4}});
  CHECK(est.rank_deficient_input);
}

TEST_CASE("multi-process weighting and validation") {
  Rng rng(413);
  Mat h = random_psd_filter(5, rng);
  std::vector<CovariancePair> pairs = {exact_pair(h, random_spd_covariance(5, 10.0, rng())),
                                       exact_pair(h, random_spd_covariance(5, 10.0, rng()))};
  PsdIdentifyResult weighted = identify_psd_multi(pairs, {100.0, 1.0});
  CHECK(frob_rel(weighted.filter.matrix, h) < 1e-8);

  CHECK_THROWS_AS(identify_psd_multi({}), std::invalid_argument);
  CHECK_THROWS_AS(identify_psd_multi(pairs, {1.0}), std::invalid_argument);
  std::vector<CovariancePair> mixed = {pairs[0],
                                       exact_pair(random_psd_filter(4, rng),
                                                  random_spd_covariance(4, 10.0, rng()))};
  CHECK_THROWS_AS(identify_psd_multi(mixed), std::invalid_argument);
}

TEST_CASE("karate-style mean error falls with more processes and more samples") {
  const int seeds = 20;
  double mean_m1 = 0.0, mean_m5 = 0.0;
  double mean_p100 = 0.0, mean_p1000 = 0.0, mean_p10000 = 0.0;
  for (int s = 0; s < seeds; ++s) {
    KarateData data = karate_setup(9200 + s, 5, 10000);
    mean_m1 += karate_error(data, 1, 10000);
    mean_m5 += karate_error(data, 5, 10000);
    mean_p100 += karate_error(data, 5, 100);
    mean_p1000 += karate_error(data, 5, 1000);
    mean_p10000 += karate_error(data, 5, 10000);
  }
  CHECK(mean_m5 / seeds < mean_m1 / seeds);
  CHECK(mean_p1000 / seeds < mean_p100 / seeds);
  CHECK(mean_p10000 / seeds < mean_p1000 / seeds);
}
