#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bnet/rng.hpp"

// Continuum-side simulators: the sticky left-right gap via its exact
// time-change construction, Skorohod reflection off a barrier with an
// exponential crossing clock, and the meeting-point triple.

namespace bnet::sde {

// ---------------------------------------------------------------------
// Sticky gap
//
// The gap D between a left-most and right-most path is a time change of
// reflected W_tau = sqrt(2) B_tau + 2 tau: X_tau = W_tau + R_tau with
// R_tau = -inf_{s<=tau} W_s, and real time t = tau + R_tau / 2. The
// local-time part of the change is the time D spends at zero.

struct StickyGapTrajectory {
  double dt = 0.0;                 // tau-grid step
  std::vector<double> times;       // real times t_k = k dt + R_k / 2
  std::vector<double> gap;         // X at the tau-grid points
  std::vector<double> local_time;  // R_k
  std::vector<double> driver;      // W_k, kept for construction checks

  double tau_at(std::size_t k) const { return dt * static_cast<double>(k); }

  // value at real time t: X_k during the moving part of a step, 0
  // during the sticky part
  double gap_at(double t) const {
    const std::size_t k = locate(t);
    if (k + 1 >= times.size()) return gap.back();
    return (t < times[k] + dt) ? gap[k] : 0.0;
  }

  bool at_zero(double t) const {
    const std::size_t k = locate(t);
    if (k + 1 >= times.size()) return gap.back() == 0.0;
    return (t < times[k] + dt) ? gap[k] == 0.0 : true;
  }

  // Lebesgue measure of {s <= t : D_s = 0}
  double occupation_zero(double t) const {
    double occ = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
      if (times[k] >= t) break;
      const double move_end = std::min(times[k] + dt, t);
      if (gap[k] == 0.0 && move_end > times[k]) occ += move_end - times[k];
      const double stick_end = std::min(times[k + 1], t);
      if (stick_end > times[k] + dt) occ += stick_end - (times[k] + dt);
    }
    return occ;
  }

 private:
  std::size_t locate(double t) const {
    // last k with times[k] <= t
    std::size_t lo = 0, hi = times.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (times[mid] <= t) lo = mid; else hi = mid - 1;
    }
    return lo;
  }
};

inline StickyGapTrajectory simulate_sticky_gap(double t_end, double dt,
                                               rng::Stream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_sticky_gap: dt > 0");
  if (dt > t_end / 100.0)
    throw std::invalid_argument("simulate_sticky_gap: dt too large for horizon");
  StickyGapTrajectory tr;
  tr.dt = dt;
  const double sigma = std::sqrt(2.0 * dt);
  double w = 0.0, r = 0.0, t_real = 0.0;
  tr.times.push_back(0.0);
  tr.gap.push_back(0.0);
  tr.local_time.push_back(0.0);
  tr.driver.push_back(0.0);
  std::size_t k = 0;
  while (t_real < t_end) {
    ++k;
    w += sigma * rng.normal() + 2.0 * dt;
    r = std::max(r, -w);
    t_real = dt * static_cast<double>(k) + 0.5 * r;
    tr.times.push_back(t_real);
    tr.gap.push_back(w + r);
    tr.local_time.push_back(r);
    tr.driver.push_back(w);
  }
  return tr;
}

// ---------------------------------------------------------------------
// Skorohod reflection off a barrier with a crossing clock

enum class Side { Left, Right };

struct ReflectCrossTrajectory {
  double dt = 0.0;
  std::vector<double> w;      // driving walk, drift +1
  std::vector<double> delta;  // Skorohod local time at the barrier
  std::vector<double> r;      // reflected (and possibly crossed) path
  double clock = 0.0;         // mean-1/2 exponential in local time
  std::optional<double> crossed_at;
  bool truncated = false;     // barrier ended before the horizon

  double time_at(std::size_t k) const { return dt * static_cast<double>(k); }
};

// Starting left of the barrier the path reflects downward and crosses
// once its local time exceeds the clock; after crossing (or when
// starting on the right) it reflects upward off the barrier. The
// barrier constrains only up to barrier_end.
template <class Barrier>
ReflectCrossTrajectory simulate_reflect_cross(
    const Barrier& barrier, double barrier_end, double x0, Side side,
    double t_end, double dt, rng::Stream& rng,
    std::optional<double> forced_clock = std::nullopt) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("simulate_reflect_cross: bad grid");
  const double b0 = barrier(0.0);
  if (side == Side::Left && x0 > b0)
    throw std::domain_error("simulate_reflect_cross: start not left of barrier");
  if (side == Side::Right && x0 < b0)
    throw std::domain_error("simulate_reflect_cross: start not right of barrier");

  ReflectCrossTrajectory tr;
  tr.dt = dt;
  tr.truncated = barrier_end < t_end;
  tr.clock = forced_clock ? *forced_clock : rng.exponential(0.5);

  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt));
  const double sigma = std::sqrt(dt);
  tr.w.resize(n + 1);
  tr.delta.assign(n + 1, 0.0);
  tr.r.resize(n + 1);
  tr.w[0] = x0;
  for (std::size_t k = 1; k <= n; ++k)
    tr.w[k] = tr.w[k - 1] + sigma * rng.normal() + dt;

  bool crossed = (side == Side::Right);
  double delta = 0.0;
  std::size_t k_cross = 0;
  if (!crossed) {
    // pre-crossing: r = W - Delta, Delta = sup (W - barrier) v 0
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = tr.time_at(k);
      if (t <= barrier_end)
        delta = std::max(delta, tr.w[k] - barrier(t));
      tr.delta[k] = delta;
      tr.r[k] = tr.w[k] - delta;
      if (delta >= tr.clock && t <= barrier_end) {
        crossed = true;
        k_cross = k;
        tr.crossed_at = t;
        break;
      }
    }
    if (!crossed) return tr;
  }

  // post-crossing (or right start): reflect upward, r = W' + Delta'
  const double r_at_cross = tr.r[k_cross];
  const double w_shift = r_at_cross - tr.w[k_cross];
  double delta2 = 0.0;
  for (std::size_t k = k_cross; k <= n; ++k) {
    const double t = tr.time_at(k);
    const double w_eff = tr.w[k] + w_shift;
    if (t <= barrier_end) delta2 = std::max(delta2, barrier(t) - w_eff);
    if (side == Side::Left) tr.delta[k] = tr.delta[k_cross] + delta2;
    else tr.delta[k] = delta2;
    tr.r[k] = w_eff + delta2;
  }
  return tr;
}

// ---------------------------------------------------------------------
// Meeting triple
//
// X = L' - L and Y = R - L for two left paths and a right path started
// with L = R and L' = L + eps. Y is the sticky gap simulated by the
// time-change device; X is driftless with quadratic variation 2 per
// unit time, sharing noise with Y while Y > 0 and independent of it
// during the sticky parts. The run stops at the first time X <= Y.

struct TripleState {
  double x0 = 0.0;
  double tau = std::numeric_limits<double>::quiet_NaN();  // real stopping time
  double y_at_tau = std::numeric_limits<double>::quiet_NaN();
  bool absorbed = false;  // Y at the stopping time is at zero (grid contact)
  bool censored = false;  // horizon exceeded before X = Y
  // optional snapshots for functional checks, at a fixed real-time stride
  std::vector<double> snap_t, snap_x, snap_y;
};

inline TripleState simulate_meeting_triple(double eps_start, double dt,
                                           rng::Stream& rng,
                                           double horizon = 8.0,
                                           double snap_stride = 0.0) {
  if (!(eps_start > 0.0))
    throw std::invalid_argument("simulate_meeting_triple: eps_start > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_meeting_triple: dt > 0");
  TripleState st;
  st.x0 = eps_start;
  const double contact_tol = std::sqrt(dt);
  const double sig_shared = std::sqrt(0.5 * dt);       // (1/sqrt2) dB_U
  const double sig_own = std::sqrt(1.5 * dt);          // independent part
  double x = eps_start;
  double wy = 0.0, ry = 0.0, y = 0.0;
  double t_real = 0.0;
  double next_snap = 0.0;
  const bool snapping = snap_stride > 0.0;
  while (t_real < horizon) {
    if (snapping && t_real >= next_snap) {
      st.snap_t.push_back(t_real);
      st.snap_x.push_back(x);
      st.snap_y.push_back(y);
      next_snap += snap_stride;
    }
    // moving part: Y > 0 regime, correlated noise
    const double u = rng.normal();
    wy += std::sqrt(2.0 * dt) * u + 2.0 * dt;
    const double ry_new = std::max(ry, -wy);
    x += sig_own * rng.normal() + sig_shared * u;
    const double stick = 0.5 * (ry_new - ry);
    ry = ry_new;
    y = wy + ry;
    t_real += dt;
    if (stick > 0.0) {
      // sticky part: Y sits at zero for `stick` real time, X moves freely
      x += std::sqrt(2.0 * stick) * rng.normal();
      t_real += stick;
      if (x <= 0.0) {
        st.tau = t_real;
        st.y_at_tau = 0.0;
        st.absorbed = true;
        return st;
      }
    }
    if (x <= y) {
      st.tau = t_real;
      st.y_at_tau = y;
      st.absorbed = y <= contact_tol;
      return st;
    }
  }
  st.censored = true;
  return st;
}

// Lyapunov functional y/x + 8 sqrt(x), a supermartingale inside
// {0 <= y < x/2, 0 < x < 1}.
inline bool in_triple_domain(double x, double y) {
  return x > 0.0 && x < 1.0 && y >= 0.0 && y < 0.5 * x;
}
inline double triple_functional(double x, double y) {
  return y / x + 8.0 * std::sqrt(x);
}

}  // namespace bnet::sde
