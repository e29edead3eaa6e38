#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace bnet::stats {

// Monte Carlo estimate together with the analytic reference it targets.
struct EstimateReport {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  std::optional<double> reference;
  std::optional<double> ratio;  // estimate / reference, when reference != 0
  bool tainted = false;

  void set_reference(double ref) {
    reference = ref;
    if (ref != 0.0) ratio = estimate / ref;
  }
};

// Pairwise (cascade) summation; associative enough that the result does
// not depend on how replicates were scheduled across workers.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                           std::size_t hi) {
  const std::size_t n = hi - lo;
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v, 0, v.size());
}

inline EstimateReport mc_mean(const std::vector<double>& values) {
  EstimateReport r;
  r.n = values.size();
  if (r.n == 0) {
    r.tainted = true;
    return r;
  }
  const double mean = pairwise_sum(values) / static_cast<double>(r.n);
  r.estimate = mean;
  if (r.n >= 2) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(r.n - 1);
    r.stderr_ = std::sqrt(var / static_cast<double>(r.n));
  }
  return r;
}

}  // namespace bnet::stats
