#include "spectemp/diffusion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spectemp {

GraphFilter fir_filter(const Gso& s, const Vec& h) {
  const int n = s.n();
  const int len = static_cast<int>(h.size());
  if (len < 1) throw std::invalid_argument("fir_filter: empty coefficient vector");
  if (len > n)
    throw std::invalid_argument("fir_filter: degree exceeds dimension (len(h) must be <= N)");
  Mat acc = Mat::Constant(n, n, 0.0);
  acc.diagonal().array() = h(len - 1);
  for (int l = len - 2; l >= 0; --l) {
    acc = acc * s.matrix;
    acc.diagonal().array() += h(l);
  }
  GraphFilter f;
  f.matrix = sym(acc);
  f.coeffs = h;
  f.kind = FilterKind::fir;
  return f;
}

GraphFilter iir_filter(const Gso& s, double alpha) {
  SymEig e = eigh(s.matrix);
  for (int i = 0; i < e.values.size(); ++i) {
    const double d = 1.0 + alpha * e.values(i);
    if (std::abs(d) <= 1e-10)
      throw std::invalid_argument("iir_filter: I + alpha*S singular at eigenvalue " +
                                  std::to_string(e.values(i)));
  }
  GraphFilter f;
  f.matrix = matmap(e, [alpha](double l) { return 1.0 / (1.0 + alpha * l); });
  f.coeffs = Vec::Constant(1, alpha);
  f.kind = FilterKind::iir;
  return f;
}

Mat propagate_covariance(const GraphFilter& h, const Mat& c_x) {
  if (h.matrix.rows() != c_x.rows())
    throw std::invalid_argument("propagate_covariance: dimension mismatch");
  return sym(h.matrix * c_x * h.matrix);
}

Mat gaussian_signals(const Mat& c_x, int p, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("gaussian_signals: need at least one sample");
  const int n = static_cast<int>(c_x.rows());
  Mat root = principal_sqrt(c_x);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  return root * g;
}

Mat uniform_signals(int n, int p, double lo, double hi, std::uint64_t seed) {
  if (n < 1 || p < 1) throw std::invalid_argument("uniform_signals: empty shape");
  if (!(hi > lo)) throw std::invalid_argument("uniform_signals: hi must exceed lo");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  Mat x(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = unif(rng);
  return x;
}

Mat add_noise(const Mat& clean, double noise_db, std::uint64_t seed) {
  if (noise_db == -std::numeric_limits<double>::infinity()) return clean;
  const double signal_power = clean.squaredNorm() / static_cast<double>(clean.size());
  const double sigma = std::sqrt(std::pow(10.0, noise_db / 10.0) * signal_power);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat noisy = clean;
  for (int j = 0; j < noisy.cols(); ++j)
    for (int i = 0; i < noisy.rows(); ++i) noisy(i, j) += sigma * gauss(rng);
  return noisy;
}

Mat simulate_outputs(const GraphFilter& h, const Mat& c_x, int p, double noise_db,
                     std::uint64_t seed) {
  Mat x = gaussian_signals(c_x, p, seed);
  Mat y0 = h.matrix * x;
  return add_noise(y0, noise_db, seed + 0x9e3779b97f4a7c15ULL);
}

Mat sample_covariance(const Mat& signals) {
  if (signals.cols() < 1) throw std::invalid_argument("sample_covariance: no samples");
  return (signals * signals.transpose()) / static_cast<double>(signals.cols());
}

Mat random_spd_covariance(int n, double condition_cap, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_spd_covariance: n must be positive");
  if (condition_cap < 1.0)
    throw std::invalid_argument("random_spd_covariance: condition_cap must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  std::uniform_real_distribution<double> unif(0.0, std::log(condition_cap));
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = (condition_cap == 1.0) ? 1.0 : std::exp(unif(rng));
  d *= 2.0 / d.maxCoeff();
  return sym(q * d.asDiagonal() * q.transpose());
}

Gso make_psd_shift(const Gso& s, double delta) {
  SymEig e = eigh(s.matrix);
  const double lmin = e.values.minCoeff();
  Gso out;
  out.matrix = s.matrix + (std::abs(lmin) + delta) * Mat::Identity(s.n(), s.n());
  out.kind = GsoKind::generic_symmetric;
  return out;
}

Vec draw_fir_coeffs(const Vec& shift_eigenvalues, int degree, Rng& rng, double floor,
                    int max_attempts) {
  if (degree < 1) throw std::invalid_argument("draw_fir_coeffs: degree must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec h(degree);
    for (int l = 0; l < degree; ++l) h(l) = unif(rng);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < shift_eigenvalues.size(); ++i) {
      double resp = 0.0;
      double pw = 1.0;
      for (int l = 0; l < degree; ++l) {
        resp += h(l) * pw;
        pw *= shift_eigenvalues(i);
      }
      lo = std::min(lo, std::abs(resp));
      hi = std::max(hi, std::abs(resp));
    }
    if (lo >= floor * hi && hi > 0.0) return h;
  }
  throw std::runtime_error("draw_fir_coeffs: redraw budget exhausted");
}

double draw_iir_alpha(const Vec& shift_eigenvalues, Rng& rng, int max_attempts) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double alpha = unif(rng);
    bool ok = true;
    for (int i = 0; i < shift_eigenvalues.size(); ++i)
      if (std::abs(1.0 + alpha * shift_eigenvalues(i)) <= 1e-6) ok = false;
    if (ok) return alpha;
  }
  throw std::runtime_error("draw_iir_alpha: redraw budget exhausted");
}

}  // namespace spectemp
