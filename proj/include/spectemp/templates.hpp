#pragma once

#include "spectemp/diffusion.hpp"
#include "spectemp/linalg.hpp"

namespace spectemp {

/// Orthonormal eigenbasis of an identified filter, with degeneracy diagnostics.
/// eigen_gaps holds consecutive gaps of the ascending filter eigenvalues; gaps
/// below gap_tol make the basis non-unique and set the degenerate flag.
struct SpectralTemplates {
  Mat basis;
  Vec values;
  Vec eigen_gaps;
  bool degenerate = false;

  int n() const { return static_cast<int>(basis.rows()); }
};

SpectralTemplates extract_spectral_templates(const GraphFilter& h, double gap_tol = 1e-8);

/// Templates straight from a symmetric matrix (ground-truth shifts in tests).
SpectralTemplates templates_from_matrix(const Mat& m, double gap_tol = 1e-8);

}  // namespace spectemp
