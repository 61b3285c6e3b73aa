#pragma once

#include <Eigen/Core>
#include <cmath>

namespace dapcal {

inline double logsumexp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf (or a nan/inf poisoned vector)
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

/// Shannon entropy in nats; 0*log(0) treated as 0.
inline double entropy(const Eigen::VectorXd& probs) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) h -= probs[i] * std::log(probs[i]);
  }
  return h;
}

inline double log_gaussian_density(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * std::log(2.0 * 3.14159265358979323846 * var) - 0.5 * r * r / var;
}

/// Quantile with linear interpolation between order statistics
/// (the numpy/R type-7 convention). `sorted` must be ascending.
inline double quantile_sorted(const Eigen::VectorXd& sorted, double p) {
  const Eigen::Index n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = p * static_cast<double>(n - 1);
  const auto lo = static_cast<Eigen::Index>(std::floor(pos));
  if (lo >= n - 1) return sorted[n - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace dapcal
