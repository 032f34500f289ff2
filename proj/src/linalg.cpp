#include "spectemp/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace spectemp {

SymEig eigh(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: matrix must be square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("eigh: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(a));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver failed");
  SymEig out{es.eigenvectors(), es.eigenvalues()};
  for (int k = 0; k < out.vectors.cols(); ++k) {
    int imax = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.vectors(imax, k) < 0.0) out.vectors.col(k) = -out.vectors.col(k);
  }
  return out;
}

Vec vech(const Mat& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("vech: matrix must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("vech: matrix is not symmetric within tolerance");
  const int n = static_cast<int>(m.rows());
  Vec v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) v(k++) = m(i, j);
  return v;
}

Mat unvech(const Vec& v) {
  const double nd = (std::sqrt(8.0 * static_cast<double>(v.size()) + 1.0) - 1.0) / 2.0;
  const int n = static_cast<int>(std::lround(nd));
  if (n * (n + 1) / 2 != v.size())
    throw std::invalid_argument("unvech: length is not a triangular number");
  Mat m(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) {
      m(i, j) = v(k);
      m(j, i) = v(k);
      ++k;
    }
  return m;
}

Mat duplication_matrix(int n) {
  if (n < 1) throw std::invalid_argument("duplication_matrix: n must be positive");
  Mat d = Mat::Zero(n * n, n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) {
      d(i + j * n, k) = 1.0;
      if (i != j) d(j + i * n, k) = 1.0;
      ++k;
    }
  return d;
}

Mat pinv(const Mat& a, double rank_tol) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cutoff = rank_tol * (s.size() > 0 ? s(0) : 0.0);
  Vec sinv = Vec::Zero(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) sinv(i) = 1.0 / s(i);
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

Mat matmap(const SymEig& e, const std::function<double(double)>& f) {
  Vec w(e.values.size());
  for (int i = 0; i < w.size(); ++i) w(i) = f(e.values(i));
  return e.vectors * w.asDiagonal() * e.vectors.transpose();
}

Mat principal_sqrt(const Mat& c, double tol_rel) {
  SymEig e = eigh(c);
  const double lmax = e.values.size() ? e.values.maxCoeff() : 0.0;
  const double floor = -tol_rel * std::max(lmax, 1.0);
  if (e.values.minCoeff() < floor)
    throw std::invalid_argument("principal_sqrt: matrix is not positive semidefinite");
  return matmap(e, [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

Mat inverse_sqrt(const Mat& c, double tol_rel) {
  SymEig e = eigh(c);
  const double lmax = e.values.size() ? e.values.maxCoeff() : 0.0;
  if (e.values.minCoeff() <= tol_rel * std::max(lmax, 1.0))
    throw std::invalid_argument("inverse_sqrt: matrix is singular or indefinite");
  return matmap(e, [](double l) { return 1.0 / std::sqrt(l); });
}

Mat khatri_rao(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("khatri_rao: column counts must match");
  Mat out(a.rows() * b.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j, b.rows(), 1) = a(i, j) * b.col(j);
  return out;
}

Mat psd_project(const Mat& a) {
  SymEig e = eigh(a);
  return matmap(e, [](double l) { return std::max(l, 0.0); });
}

double offdiagonal_mass(const Mat& basis, const Mat& c) {
  Mat r = basis.transpose() * c * basis;
  r.diagonal().setZero();
  return r.norm();
}

}  // namespace spectemp
