#pragma once

#include <string>
#include <vector>

#include "spectemp/linalg.hpp"

namespace spectemp {

enum class GsoKind { adjacency, laplacian, normalized_laplacian, generic_symmetric };

/// Symmetric graph-shift operator with a structural kind tag.
struct Gso {
  Mat matrix;
  GsoKind kind = GsoKind::generic_symmetric;

  int n() const { return static_cast<int>(matrix.rows()); }
};

enum class ConstraintVariant { adjacency, normalized_laplacian };

/// Structural constraint set used by topology recovery. The adjacency variant
/// encodes: nonnegative entries, hollow diagonal, symmetry, and a fixed scale
/// through node `scale_node`'s weighted degree. The normalized-Laplacian variant
/// encodes: nonpositive off-diagonal, symmetry, unit diagonal.
struct ConstraintSet {
  ConstraintVariant variant = ConstraintVariant::adjacency;
  int scale_node = 0;
};

struct ConstraintViolation {
  std::string name;
  double magnitude = 0.0;
};

struct ValidationReport {
  bool pass = true;
  std::vector<ConstraintViolation> constraints;
};

ValidationReport validate(const Gso& s, const ConstraintSet& cs, double tol = 1e-8);

/// Validity of the Gso against its own kind tag (symmetry, sign patterns, row sums).
ValidationReport validate_kind(const Gso& s, double tol = 1e-8);

Mat normalized_laplacian(const Mat& adjacency);

/// S = I - L_n / lmax(L_n); spectrum lands in [0, 1].
Gso shift_from_normalized_laplacian(const Mat& ln);

/// Connected Erdos-Renyi adjacency, deterministic in the seed. Retries up to
/// max_retries draws before giving up.
Gso erdos_renyi(int n, double p, std::uint64_t seed, int max_retries = 200);

bool is_connected(const Mat& adjacency);

Gso load_edge_list(const std::string& path, bool weighted = false, int n_declared = -1,
                   bool one_indexed = false);
void save_edge_list(const std::string& path, const Gso& g, double threshold = 0.0);

/// ||S_est - S_true||_F / ||S_true||_F.
double recovery_error(const Mat& s_est, const Mat& s_true);

/// Rescales so that column `scale_node`'s sum is 1 (the recovery scale convention).
Mat normalize_scale(const Mat& s, int scale_node = 0);

}  // namespace spectemp
