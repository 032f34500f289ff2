#pragma once

#include <vector>

#include "spectemp/diffusion.hpp"
#include "spectemp/linalg.hpp"

namespace spectemp {

struct PsdIdentifyResult {
  GraphFilter filter;
  /// Frobenius distance between the raw least-squares solution and the returned
  /// symmetrized + PSD-clipped filter; zero means the projection was a no-op.
  double pre_projection_deviation = 0.0;
  double asymmetry_pre = 0.0;
  double min_eigenvalue_pre = 0.0;
  bool rank_deficient_input = false;
};

/// Closed-form single-process PSD filter identification:
/// H = C_x^{-1/2} (C_x^{1/2} C_y C_x^{1/2})^{1/2} C_x^{-1/2}.
/// Exact when C_y was propagated through a PSD filter.
GraphFilter identify_psd_single(const CovariancePair& pair);

/// Multi-process PSD identification: least squares over the stacked relations
/// C_x,m^{1/2} H C_x,m^{1/2} = (C_x,m^{1/2} C_y,m C_x,m^{1/2})^{1/2}, solved via
/// accumulated normal equations sum_m w_m (C_m kron C_m) vec(H) = rhs; the raw
/// solution is then symmetrized and clipped to the PSD cone. Weights default to
/// uniform; pass per-pair weights (e.g. sample counts) to emphasize processes.
PsdIdentifyResult identify_psd_multi(const std::vector<CovariancePair>& pairs,
                                     const std::vector<double>& weights = {});

}  // namespace spectemp
