#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bnet/report.hpp"
#include "bnet/rng.hpp"

// Excursion decomposition of reflected Brownian motion, the duration
// intensity nu(dh) = dh / sqrt(2 pi h^3), and the crossing-thinning law
// for right-most paths run against excursion boundaries.

namespace bnet::excursion {

// ---------------------------------------------------------------------
// Reflected walk and excursion records

struct ReflectedWalk {
  double dt = 0.0;
  std::vector<double> b;    // Brownian samples, b[0] = 0
  std::vector<double> psi;  // running compensator -inf b
  std::vector<double> x;    // b + psi >= 0

  static ReflectedWalk from_brownian(std::vector<double> samples, double dt) {
    ReflectedWalk w;
    w.dt = dt;
    w.b = std::move(samples);
    w.psi.resize(w.b.size());
    w.x.resize(w.b.size());
    double m = 0.0;
    for (std::size_t k = 0; k < w.b.size(); ++k) {
      m = std::max(m, -w.b[k]);
      w.psi[k] = m;
      w.x[k] = w.b[k] + m;
    }
    return w;
  }

  static ReflectedWalk simulate(double t_end, double dt, rng::Stream& rng) {
    if (!(dt > 0.0) || !(t_end > dt))
      throw std::invalid_argument("ReflectedWalk: bad grid");
    const auto n = static_cast<std::size_t>(std::ceil(t_end / dt));
    std::vector<double> b(n + 1);
    b[0] = 0.0;
    const double sigma = std::sqrt(dt);
    for (std::size_t k = 1; k <= n; ++k) b[k] = b[k - 1] + sigma * rng.normal();
    return from_brownian(std::move(b), dt);
  }

  double horizon() const { return dt * static_cast<double>(b.size() - 1); }
};

struct ExcursionRecord {
  double start = 0.0;             // time of the zero opening the excursion
  double duration = 0.0;          // time between the bracketing zeros
  double local_time_level = 0.0;  // compensator value at the start
};

// Maximal grid intervals with X > 0, bracketed by exact zeros of the
// reflected walk (X = 0 precisely where B attains a new minimum).
// An excursion still open at the horizon is not recorded.
inline std::vector<ExcursionRecord> decompose_excursions(const ReflectedWalk& w) {
  std::vector<ExcursionRecord> out;
  const std::size_t n = w.x.size();
  std::size_t k = 0;
  while (k + 1 < n) {
    if (w.x[k] == 0.0 && w.x[k + 1] > 0.0) {
      const std::size_t open = k;
      std::size_t j = k + 1;
      while (j < n && w.x[j] > 0.0) ++j;
      if (j < n) {
        out.push_back({w.dt * static_cast<double>(open),
                       w.dt * static_cast<double>(j - open),
                       w.psi[open]});
        k = j;
        continue;
      }
      break;  // open at horizon
    }
    ++k;
  }
  return out;
}

// nu([h, infinity)) for nu(dh) = dh / sqrt(2 pi h^3)
inline double tail_intensity_reference(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("tail_intensity_reference: h > 0");
  return std::sqrt(2.0 / (M_PI * h));
}

inline stats::EstimateReport tail_intensity_estimate(
    const std::vector<ExcursionRecord>& records, double local_time_total,
    double h) {
  if (!(local_time_total > 0.0))
    throw std::invalid_argument("tail_intensity_estimate: no local time");
  std::size_t count = 0;
  for (const auto& r : records)
    if (r.duration >= h) ++count;
  stats::EstimateReport rep;
  rep.n = count;
  rep.estimate = static_cast<double>(count) / local_time_total;
  rep.stderr_ = std::sqrt(static_cast<double>(count)) / local_time_total;
  rep.set_reference(tail_intensity_reference(h));
  return rep;
}

// Streaming tail counter: runs reflected walks until a local-time
// budget is spent, cutting excursions at h_cap (tail counts for h <=
// h_cap are unaffected by the cut, and each cut restarts the walk at a
// fresh excursion boundary).
struct TailCounts {
  std::vector<double> h;
  std::vector<std::size_t> count;
  double local_time = 0.0;
};

inline TailCounts count_tail_excursions(double local_time_budget,
                                        std::vector<double> h_values,
                                        double h_cap, double dt,
                                        rng::Stream& rng) {
  if (!(local_time_budget > 0.0) || !(dt > 0.0) || !(h_cap > 0.0))
    throw std::invalid_argument("count_tail_excursions: bad parameters");
  TailCounts tc;
  tc.h = std::move(h_values);
  tc.count.assign(tc.h.size(), 0);
  const double sigma = std::sqrt(dt);
  const auto cap_steps = static_cast<std::size_t>(std::ceil(h_cap / dt));
  double b = 0.0, minb = 0.0;
  std::size_t run = 0;  // steps since the walk left its running minimum
  const auto record = [&](double duration) {
    for (std::size_t i = 0; i < tc.h.size(); ++i)
      if (duration >= tc.h[i]) ++tc.count[i];
  };
  while (tc.local_time < local_time_budget) {
    b += sigma * rng.normal();
    if (b <= minb) {
      if (run > 0) record(dt * static_cast<double>(run + 1));
      run = 0;
      tc.local_time += minb - b;
      minb = b;
    } else {
      ++run;
      if (run >= cap_steps) {
        record(dt * static_cast<double>(run + 1));
        run = 0;
        b = minb;  // restart at the excursion boundary
      }
    }
  }
  return tc;
}

// ---------------------------------------------------------------------
// Crossing thinning
//
// Conditional on an excursion of X of duration h, the left path during
// the excursion is L(t) = B_t - t - F(t)/sqrt(2) with F the excursion
// shape and B a fresh Brownian motion. A right-most path started at the
// excursion's bottom reflects off L and crosses when its Skorohod local
// time Delta exceeds an independent mean-1/2 exponential clock:
// rho(h) = P[cross before h] = E[1 - e^{-2 Delta_h}].

struct ThinningSample {
  double h = 0.0;
  double delta_h = 0.0;        // local time of the drifted reflection
  double delta_prime_h = 0.0;  // drift-free variant, exactly sqrt(h)-scaling
  bool crossed = false;
  double closed_form = 0.0;    // 1 - exp(-2 delta_h)
};

struct ThinningReport {
  stats::EstimateReport direct;       // indicator estimate of rho(h)
  stats::EstimateReport closed_form;  // E[1 - e^{-2 Delta_h}] on same paths
  double rho_over_sqrt_h = 0.0;
  double scaling_stat = 0.0;  // mean of 2 Delta'_h / sqrt(h), h-invariant
  double mean_h = 0.0;
  std::size_t n = 0;
};

namespace detail {

// Harvest one excursion shape with duration in [h_lo, h_hi): X values
// from the opening zero to the closing zero. Runs longer than h_hi are
// abandoned and the walk restarts at the excursion boundary.
inline std::vector<double> harvest_shape(double h_lo, double h_hi, double dt,
                                         rng::Stream& rng) {
  const double sigma = std::sqrt(dt);
  const auto max_steps = static_cast<std::size_t>(std::ceil(h_hi / dt));
  std::vector<double> shape;
  double b = 0.0, minb = 0.0;
  shape.reserve(max_steps + 1);
  shape.push_back(0.0);
  while (true) {
    b += sigma * rng.normal();
    if (b <= minb) {
      // excursion closed
      const double duration = dt * static_cast<double>(shape.size());
      if (shape.size() > 1 && duration >= h_lo && duration < h_hi) {
        shape.push_back(0.0);
        return shape;
      }
      minb = b;
      shape.assign(1, 0.0);
    } else {
      shape.push_back(b - minb);
      if (shape.size() > max_steps) {
        b = minb;  // too long for the bucket; restart
        shape.assign(1, 0.0);
      }
    }
  }
}

}  // namespace detail

inline ThinningSample thinning_sample(double h_lo, double h_hi, double dt,
                                      rng::Stream& rng) {
  const std::vector<double> shape = detail::harvest_shape(h_lo, h_hi, dt, rng);
  const std::size_t n = shape.size() - 1;
  const double h = dt * static_cast<double>(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double sigma = std::sqrt(dt);
  ThinningSample s;
  s.h = h;
  double wb = 0.0;  // fresh Brownian of the left path
  double wprime = 0.0;  // driving walk of the right-most path, drift +1
  double delta = 0.0, delta_prime = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    wb += sigma * rng.normal();
    wprime += sigma * rng.normal() + dt;
    const double t = dt * static_cast<double>(k);
    const double barrier = wb - t - inv_sqrt2 * shape[k];
    delta = std::max(delta, wprime - barrier);
    delta_prime = std::max(delta_prime, wprime - barrier - 2.0 * t);
  }
  s.delta_h = delta;
  s.delta_prime_h = delta_prime;
  s.closed_form = 1.0 - std::exp(-2.0 * delta);
  s.crossed = delta >= rng.exponential(0.5);
  return s;
}

inline ThinningReport crossing_thinning_reduce(
    const std::vector<ThinningSample>& samples) {
  ThinningReport rep;
  rep.n = samples.size();
  std::vector<double> ind, cf, scal, hs;
  ind.reserve(samples.size());
  for (const auto& s : samples) {
    ind.push_back(s.crossed ? 1.0 : 0.0);
    cf.push_back(s.closed_form);
    scal.push_back(2.0 * s.delta_prime_h / std::sqrt(s.h));
    hs.push_back(s.h);
  }
  rep.direct = stats::mc_mean(ind);
  rep.closed_form = stats::mc_mean(cf);
  if (!samples.empty()) {
    rep.mean_h = stats::pairwise_sum(hs) / static_cast<double>(hs.size());
    rep.rho_over_sqrt_h = rep.closed_form.estimate / std::sqrt(rep.mean_h);
    rep.scaling_stat =
        stats::pairwise_sum(scal) / static_cast<double>(scal.size());
  }
  return rep;
}

inline ThinningReport crossing_thinning_estimate(double h_lo, double h_hi,
                                                 std::size_t reps, double dt,
                                                 rng::Stream& rng) {
  std::vector<ThinningSample> samples;
  samples.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i)
    samples.push_back(thinning_sample(h_lo, h_hi, dt, rng));
  return crossing_thinning_reduce(samples);
}

}  // namespace bnet::excursion
