#include "spectemp/filter_id_psd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spectemp {

namespace {

void check_cx(const Mat& c_x) {
  SymEig e = eigh(c_x);
  const double lmax = e.values.maxCoeff();
  const double lmin = e.values.minCoeff();
  if (lmin <= 1e-10 * std::max(lmax, 1.0)) {
    const double cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
    throw std::invalid_argument("identify_psd: singular input covariance, condition number " +
                                std::to_string(cond));
  }
}

Mat sqrt_cxyx(const Mat& root_cx, const Mat& c_y) {
  return principal_sqrt(sym(root_cx * c_y * root_cx), 1e-8);
}

}  // namespace

GraphFilter identify_psd_single(const CovariancePair& pair) {
  check_cx(pair.c_x);
  Mat root = principal_sqrt(pair.c_x);
  Mat iroot = inverse_sqrt(pair.c_x);
  GraphFilter f;
  f.matrix = sym(iroot * sqrt_cxyx(root, pair.c_y_hat) * iroot);
  f.kind = FilterKind::raw;
  return f;
}

PsdIdentifyResult identify_psd_multi(const std::vector<CovariancePair>& pairs,
                                     const std::vector<double>& weights) {
  if (pairs.empty()) throw std::invalid_argument("identify_psd_multi: no pairs");
  if (!weights.empty() && weights.size() != pairs.size())
    throw std::invalid_argument("identify_psd_multi: weight count mismatch");
  const int n = pairs.front().n();
  for (const auto& p : pairs)
    if (p.c_x.rows() != n || p.c_y_hat.rows() != n)
      throw std::invalid_argument("identify_psd_multi: inconsistent dimensions");

  PsdIdentifyResult res;
  Mat lhs = Mat::Zero(n * n, n * n);
  Vec rhs = Vec::Zero(n * n);
  for (size_t m = 0; m < pairs.size(); ++m) {
    const double w = weights.empty() ? 1.0 : weights[m];
    check_cx(pairs[m].c_x);
    const Mat& cy = pairs[m].c_y_hat;
    if (eigh(cy).values.minCoeff() < -1e-8 * std::max(1.0, cy.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("identify_psd_multi: output covariance not PSD");
    if (pairs[m].samples > 0 && pairs[m].samples < n) res.rank_deficient_input = true;
    Mat root = principal_sqrt(pairs[m].c_x);
    Mat target = root * sqrt_cxyx(root, cy) * root;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        lhs.block(j * n, i * n, n, n) += (w * pairs[m].c_x(j, i)) * pairs[m].c_x;
    rhs += w * Eigen::Map<const Vec>(target.data(), target.size());
  }

  Vec vh = lhs.ldlt().solve(rhs);
  Mat h_raw = Eigen::Map<const Mat>(vh.data(), n, n);
  res.asymmetry_pre = (h_raw - h_raw.transpose()).norm();
  Mat h_sym = sym(h_raw);
  res.min_eigenvalue_pre = eigh(h_sym).values.minCoeff();
  Mat h_proj = psd_project(h_sym);
  res.pre_projection_deviation = (h_raw - h_proj).norm();
  res.filter.matrix = h_proj;
  res.filter.kind = FilterKind::raw;
  return res;
}

}  // namespace spectemp
