#include "spectemp/templates.hpp"

namespace spectemp {

SpectralTemplates templates_from_matrix(const Mat& m, double gap_tol) {
  SymEig e = eigh(m);
  SpectralTemplates t;
  t.basis = e.vectors;
  t.values = e.values;
  const int n = static_cast<int>(e.values.size());
  t.eigen_gaps = Vec::Zero(std::max(0, n - 1));
  for (int i = 0; i + 1 < n; ++i) t.eigen_gaps(i) = e.values(i + 1) - e.values(i);
  t.degenerate = (n > 1) && (t.eigen_gaps.minCoeff() < gap_tol);
  return t;
}

SpectralTemplates extract_spectral_templates(const GraphFilter& h, double gap_tol) {
  return templates_from_matrix(h.matrix, gap_tol);
}

}  // namespace spectemp
