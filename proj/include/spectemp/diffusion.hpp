#pragma once

#include <optional>
#include <vector>

#include "spectemp/graph.hpp"
#include "spectemp/linalg.hpp"

namespace spectemp {

enum class FilterKind { fir, iir, raw };

/// Symmetric graph filter, optionally carrying the generating coefficients.
struct GraphFilter {
  Mat matrix;
  std::optional<Vec> coeffs;
  FilterKind kind = FilterKind::raw;

  int n() const { return static_cast<int>(matrix.rows()); }
};

/// Input covariance plus observed output covariance for one diffusion process.
/// samples == 0 marks ensemble (exact) covariances.
struct CovariancePair {
  Mat c_x;
  Mat c_y_hat;
  long samples = 0;

  int n() const { return static_cast<int>(c_x.rows()); }
};

/// Polynomial filter H = sum_l h_l S^l, Horner-evaluated and symmetrized.
/// Degree is capped at the ambient dimension: len(h) <= N.
GraphFilter fir_filter(const Gso& s, const Vec& h);

/// H = (I + alpha*S)^{-1}. Rejects draws where some |1 + alpha*lambda_i| <= 1e-10.
GraphFilter iir_filter(const Gso& s, double alpha);

/// C_y = H C_x H, symmetrized.
Mat propagate_covariance(const GraphFilter& h, const Mat& c_x);

/// Zero-mean Gaussian signals with covariance c_x, one column per sample.
Mat gaussian_signals(const Mat& c_x, int p, std::uint64_t seed);

/// i.i.d. uniform entries on [lo, hi].
Mat uniform_signals(int n, int p, double lo, double hi, std::uint64_t seed);

/// Additive white Gaussian noise at noise_db relative to the mean per-entry
/// power of the clean signal. noise_db = -inf leaves the input untouched.
Mat add_noise(const Mat& clean, double noise_db, std::uint64_t seed);

/// y = H x + n with x ~ N(0, C_x) and noise at noise_db below the signal power.
Mat simulate_outputs(const GraphFilter& h, const Mat& c_x, int p, double noise_db,
                     std::uint64_t seed);

/// (1/P) Y Y^T; zero-mean model, no mean subtraction.
Mat sample_covariance(const Mat& signals);

/// Full-rank SPD matrix with condition number at most condition_cap.
Mat random_spd_covariance(int n, double condition_cap, std::uint64_t seed);

/// S <- S + (|lambda_min(S)| + delta) I, the PSD-filter fixture shift.
Gso make_psd_shift(const Gso& s, double delta = 0.1);

/// Uniform [0,1] FIR coefficients, redrawn until the filter response is bounded
/// away from zero: min|h(lambda)| >= floor * max|h(lambda)|.
Vec draw_fir_coeffs(const Vec& shift_eigenvalues, int degree, Rng& rng, double floor = 0.1,
                    int max_attempts = 200);

/// Uniform [0,1] IIR coefficient redrawn while I + alpha*S is near-singular.
double draw_iir_alpha(const Vec& shift_eigenvalues, Rng& rng, int max_attempts = 200);

}  // namespace spectemp
