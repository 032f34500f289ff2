#include "spectemp/filter_id_linear.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace spectemp {

namespace {

struct PairIndex {
  int p, q;  // p >= q, column-major lower-triangle order
};

std::vector<PairIndex> vech_pairs(int n) {
  std::vector<PairIndex> pairs;
  pairs.reserve(n * (n + 1) / 2);
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) pairs.push_back({i, j});
  return pairs;
}

}  // namespace

Mat ls_design_matrix(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  const int m = static_cast<int>(x.cols());
  const auto pairs = vech_pairs(n);
  Mat a = Mat::Zero(n * m, static_cast<int>(pairs.size()));
  // Column k of (X^T kron I) D stacks the action of the symmetric basis matrix
  // E_pq = e_p e_q^T + e_q e_p^T (or e_p e_p^T on the diagonal) on each input.
  for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
    const auto [p, q] = pairs[k];
    for (int col = 0; col < m; ++col) {
      a(col * n + p, k) += x(q, col);
      if (p != q) a(col * n + q, k) += x(p, col);
    }
  }
  return a;
}

GraphFilter identify_ls(const Mat& x, const Mat& y, LsRoute route) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("identify_ls: X and Y shapes must match");
  if (x.cols() < 1) throw std::invalid_argument("identify_ls: need at least one pair");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("identify_ls: non-finite data");
  const int n = static_cast<int>(x.rows());
  const long nm = static_cast<long>(n) * x.cols();
  const bool use_normal =
      route == LsRoute::normal_equations || (route == LsRoute::automatic && nm > 10000);

  Vec v;
  if (!use_normal) {
    Mat a = ls_design_matrix(x);
    Vec rhs = Eigen::Map<const Vec>(y.data(), y.size());
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
    cod.setThreshold(1e-10);
    v = cod.solve(rhs);
  } else {
    const auto pairs = vech_pairs(n);
    const int nh = static_cast<int>(pairs.size());
    Mat b = x * x.transpose();
    Mat yx = y * x.transpose();
    Mat g(nh, nh);
    for (int k1 = 0; k1 < nh; ++k1) {
      const auto [p, q] = pairs[k1];
      for (int k2 = k1; k2 < nh; ++k2) {
        const auto [r, s] = pairs[k2];
        double val = 0.0;
        // <E_pq x_m, E_rs x_m> summed over m, in Gram form via B = X X^T.
        val += (p == r) ? b(q, s) : 0.0;
        if (r != s) val += (p == s) ? b(q, r) : 0.0;
        if (p != q) {
          val += (q == r) ? b(p, s) : 0.0;
          if (r != s) val += (q == s) ? b(p, r) : 0.0;
        }
        g(k1, k2) = val;
        g(k2, k1) = val;
      }
    }
    Vec rhs(nh);
    for (int k = 0; k < nh; ++k) {
      const auto [p, q] = pairs[k];
      rhs(k) = yx(p, q) + ((p != q) ? yx(q, p) : 0.0);
    }
    v = pinv(g) * rhs;
  }

  GraphFilter f;
  f.matrix = unvech(v);
  f.kind = FilterKind::raw;
  return f;
}

GraphFilter identify_ls_asymmetric(const Mat& x, const Mat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("identify_ls_asymmetric: X and Y shapes must match");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("identify_ls_asymmetric: non-finite data");
  GraphFilter f;
  f.matrix = y * pinv(x);
  f.kind = FilterKind::raw;
  return f;
}

RankBoundReport rank_bound(const Mat& x, double rank_tol) {
  const int n = static_cast<int>(x.rows());
  const int nh = n * (n + 1) / 2;
  RankBoundReport rep;
  {
    Eigen::JacobiSVD<Mat> svd(x);
    const Vec& s = svd.singularValues();
    const double cut = rank_tol * (s.size() ? s(0) : 0.0);
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > cut) ++rep.input_rank;
  }
  {
    Mat a = ls_design_matrix(x);
    Eigen::JacobiSVD<Mat> svd(a);
    const Vec& s = svd.singularValues();
    const double cut = rank_tol * (s.size() ? s(0) : 0.0);
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > cut) ++rep.numeric_rank;
  }
  const int k = n - rep.input_rank;
  rep.bound = nh - (k + 1) * k / 2;
  return rep;
}

NullSpaceBasisReport null_space_basis_check(const Mat& x, double tol) {
  const int n = static_cast<int>(x.rows());
  NullSpaceBasisReport rep;

  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU);
  const Vec& s = svd.singularValues();
  const double cut = 1e-10 * (s.size() ? s(0) : 0.0);
  int mr = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++mr;
  const int k = n - mr;
  if (k == 0) return rep;  // vacuous pass

  Mat kernel = svd.matrixU().rightCols(k);  // basis of ker(X^T)
  Mat d = duplication_matrix(n);
  Mat dpinv = pinv(d);
  Mat a = ls_design_matrix(x);
  const double a_scale = std::max(1.0, a.norm());

  Mat collection(n * (n + 1) / 2, k * (k + 1) / 2);
  int col = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Vec vi = kernel.col(i), vj = kernel.col(j);
      Mat outer = vi * vj.transpose() + vj * vi.transpose();
      Vec vec_outer = Eigen::Map<const Vec>(outer.data(), outer.size());
      collection.col(col++) = dpinv * vec_outer;
    }
  rep.count = static_cast<int>(collection.cols());

  rep.max_residual = (a * collection).cwiseAbs().maxCoeff() / a_scale;
  rep.in_null_space = rep.max_residual < tol;

  Mat gram = collection.transpose() * collection;
  rep.gram_min_eigenvalue = eigh(gram).values.minCoeff();
  rep.independent = rep.gram_min_eigenvalue > 1e-12;

  rep.pass = rep.in_null_space && rep.independent;
  return rep;
}

}  // namespace spectemp
