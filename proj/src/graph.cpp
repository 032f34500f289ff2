#include "spectemp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace spectemp {

namespace {

void push_check(ValidationReport& r, const std::string& name, double magnitude, double tol) {
  r.constraints.push_back({name, magnitude});
  if (magnitude > tol) r.pass = false;
}

}  // namespace

ValidationReport validate(const Gso& s, const ConstraintSet& cs, double tol) {
  const Mat& m = s.matrix;
  if (m.rows() != m.cols()) throw std::invalid_argument("validate: matrix must be square");
  ValidationReport r;
  push_check(r, "symmetry", (m - m.transpose()).cwiseAbs().maxCoeff(), tol);
  if (cs.variant == ConstraintVariant::adjacency) {
    push_check(r, "nonnegative entries", std::max(0.0, -m.minCoeff()), tol);
    push_check(r, "zero diagonal", m.diagonal().cwiseAbs().maxCoeff(), tol);
    if (cs.scale_node < 0 || cs.scale_node >= m.rows())
      throw std::invalid_argument("validate: scale_node out of range");
    push_check(r, "unit degree at scale node",
               std::abs(m.col(cs.scale_node).sum() - 1.0), tol);
  } else {
    Mat off = m;
    off.diagonal().setZero();
    push_check(r, "nonpositive off-diagonal", std::max(0.0, off.maxCoeff()), tol);
    push_check(r, "unit diagonal", (m.diagonal().array() - 1.0).abs().maxCoeff(), tol);
  }
  return r;
}

ValidationReport validate_kind(const Gso& s, double tol) {
  const Mat& m = s.matrix;
  if (m.rows() != m.cols()) throw std::invalid_argument("validate_kind: matrix must be square");
  ValidationReport r;
  push_check(r, "symmetry", (m - m.transpose()).cwiseAbs().maxCoeff(), tol);
  switch (s.kind) {
    case GsoKind::adjacency:
      push_check(r, "nonnegative entries", std::max(0.0, -m.minCoeff()), tol);
      push_check(r, "zero diagonal", m.diagonal().cwiseAbs().maxCoeff(), tol);
      break;
    case GsoKind::laplacian: {
      Mat off = m;
      off.diagonal().setZero();
      push_check(r, "nonpositive off-diagonal", std::max(0.0, off.maxCoeff()), tol);
      push_check(r, "zero row sums", m.rowwise().sum().cwiseAbs().maxCoeff(), tol);
      break;
    }
    case GsoKind::normalized_laplacian: {
      Mat off = m;
      off.diagonal().setZero();
      push_check(r, "nonpositive off-diagonal", std::max(0.0, off.maxCoeff()), tol);
      push_check(r, "unit diagonal", (m.diagonal().array() - 1.0).abs().maxCoeff(), tol);
      break;
    }
    case GsoKind::generic_symmetric:
      break;
  }
  return r;
}

Mat normalized_laplacian(const Mat& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("normalized_laplacian: matrix must be square");
  const int n = static_cast<int>(adjacency.rows());
  Vec deg = adjacency.rowwise().sum();
  Vec dinv = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (deg(i) <= 0.0)
      throw std::invalid_argument("normalized_laplacian: isolated node " + std::to_string(i));
    dinv(i) = 1.0 / std::sqrt(deg(i));
  }
  Mat ln = Mat::Identity(n, n) - dinv.asDiagonal() * adjacency * dinv.asDiagonal();
  return sym(ln);
}

Gso shift_from_normalized_laplacian(const Mat& ln) {
  SymEig e = eigh(ln);
  const double lmin = e.values.minCoeff();
  const double lmax = e.values.maxCoeff();
  if (lmin < -1e-8 * std::max(1.0, lmax))
    throw std::invalid_argument("shift_from_normalized_laplacian: input is not PSD");
  if (lmax <= 1e-12)
    throw std::invalid_argument("shift_from_normalized_laplacian: zero Laplacian is degenerate");
  Gso g;
  g.matrix = sym(Mat::Identity(ln.rows(), ln.cols()) - ln / lmax);
  g.kind = GsoKind::generic_symmetric;
  return g;
}

bool is_connected(const Mat& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && adjacency(u, v) != 0.0) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

Gso erdos_renyi(int n, double p, std::uint64_t seed, int max_retries) {
  if (n < 2) throw std::invalid_argument("erdos_renyi: need at least 2 nodes");
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi: p must be in (0, 1]");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Mat a = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < p) a(i, j) = a(j, i) = 1.0;
    if (is_connected(a)) return Gso{a, GsoKind::adjacency};
  }
  throw std::runtime_error("erdos_renyi: retry budget exhausted without a connected draw");
}

Gso load_edge_list(const std::string& path, bool weighted, int n_declared, bool one_indexed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);
  std::map<std::pair<int, int>, double> edges;
  int max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    const auto h = trimmed.find('#');
    if (h != std::string::npos) trimmed.erase(h);
    std::istringstream ss(trimmed);
    long i = 0, j = 0;
    if (!(ss >> i)) continue;
    double w = 1.0;
    if (!(ss >> j) || (weighted && !(ss >> w)))
      throw std::runtime_error("load_edge_list: parse failure at line " + std::to_string(lineno));
    if (one_indexed) {
      --i;
      --j;
    }
    if (i < 0 || j < 0)
      throw std::runtime_error("load_edge_list: negative index at line " + std::to_string(lineno));
    if (i == j)
      throw std::runtime_error("load_edge_list: self-loop at line " + std::to_string(lineno));
    const int lo = static_cast<int>(std::min(i, j));
    const int hi = static_cast<int>(std::max(i, j));
    auto [it, inserted] = edges.emplace(std::make_pair(lo, hi), w);
    if (!inserted) {
      if (it->second != w)
        throw std::runtime_error("load_edge_list: conflicting duplicate at line " +
                                 std::to_string(lineno));
      throw std::runtime_error("load_edge_list: duplicate edge at line " + std::to_string(lineno));
    }
    max_node = std::max(max_node, hi);
  }
  if (edges.empty()) throw std::runtime_error("load_edge_list: no edges in " + path);
  int n = (n_declared > 0) ? n_declared : max_node + 1;
  if (max_node >= n)
    throw std::runtime_error("load_edge_list: index " + std::to_string(max_node) +
                             " out of range for declared size " + std::to_string(n));
  Mat a = Mat::Zero(n, n);
  for (const auto& [key, w] : edges) a(key.first, key.second) = a(key.second, key.first) = w;
  return Gso{a, GsoKind::adjacency};
}

void save_edge_list(const std::string& path, const Gso& g, double threshold) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_edge_list: cannot open " + path);
  const Mat& m = g.matrix;
  const bool unit = (m.array() == 0.0 || (m.array() - 1.0).abs() < 1e-12).all();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > threshold) {
        out << i << " " << j;
        if (!unit) out << " " << m(i, j);
        out << "\n";
      }
}

double recovery_error(const Mat& s_est, const Mat& s_true) {
  if (s_est.rows() != s_true.rows() || s_est.cols() != s_true.cols())
    throw std::invalid_argument("recovery_error: shape mismatch");
  const double denom = s_true.norm();
  if (denom <= 0.0) throw std::invalid_argument("recovery_error: zero ground truth");
  return (s_est - s_true).norm() / denom;
}

Mat normalize_scale(const Mat& s, int scale_node) {
  if (scale_node < 0 || scale_node >= s.cols())
    throw std::invalid_argument("normalize_scale: scale_node out of range");
  const double c = s.col(scale_node).sum();
  if (std::abs(c) < 1e-14)
    throw std::invalid_argument("normalize_scale: zero degree at scale node");
  return s / c;
}

}  // namespace spectemp
