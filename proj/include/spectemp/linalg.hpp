#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>

namespace spectemp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline Mat sym(const Mat& a) { return 0.5 * (a + a.transpose()); }

/// Eigendecomposition of a symmetric matrix with a deterministic convention:
/// eigenvalues ascending, each eigenvector's largest-magnitude entry made positive
/// (first such index on ties).
struct SymEig {
  Mat vectors;
  Vec values;
};

SymEig eigh(const Mat& a);

/// Half-vectorization: column-major stacking of the lower triangle (diagonal included).
/// Input must be symmetric within tol.
Vec vech(const Mat& m, double tol = 1e-8);
Mat unvech(const Vec& v);

/// n^2 x n(n+1)/2 binary matrix with D * vech(H) = vec(H) for symmetric H.
Mat duplication_matrix(int n);

/// Moore-Penrose pseudoinverse via SVD thresholding.
Mat pinv(const Mat& a, double rank_tol = 1e-10);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol_rel*lmax, 0) are
/// clipped to 0; below that the input is rejected as not PSD.
Mat principal_sqrt(const Mat& c, double tol_rel = 1e-10);

/// Inverse principal square root; rejects effectively singular input.
Mat inverse_sqrt(const Mat& c, double tol_rel = 1e-10);

/// Columnwise Kronecker product: column j is kron(A.col(j), B.col(j)).
Mat khatri_rao(const Mat& a, const Mat& b);

/// Projection onto the PSD cone (eigenvalue clipping at 0).
Mat psd_project(const Mat& a);

/// Frobenius mass of the off-diagonal part of Vt * C * V; the stationarity probe.
double offdiagonal_mass(const Mat& basis, const Mat& c);

Mat matmap(const SymEig& e, const std::function<double(double)>& f);

}  // namespace spectemp
