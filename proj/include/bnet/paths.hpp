#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bnet/lattice.hpp"

// Arrow-following space-time trajectories: extremal (left-most /
// right-most) forward and dual paths, reflected paths, hopping, and the
// metrics on rescaled paths and path sets.

namespace bnet::paths {

using lattice::ArrowField;
using lattice::Mask;
using lattice::ParityError;

// Forward path: positions at integer times start_time, start_time+1, ...
// Parity x + t stays constant mod 2 along a path; forward paths live on
// the even class, but the type admits either class so that dual-vs-
// forward comparisons (odd position differences) are expressible.
struct LatticePath {
  long long start_time = 0;
  std::vector<long long> positions;
  bool tainted = false;  // touched the spatial window boundary

  long long end_time() const {
    return start_time + static_cast<long long>(positions.size()) - 1;
  }
  bool defined_at(long long t) const { return t >= start_time && t <= end_time(); }
  long long at(long long t) const {
    if (!defined_at(t)) throw std::out_of_range("LatticePath::at");
    return positions[static_cast<std::size_t>(t - start_time)];
  }
  int parity() const {
    if (positions.empty()) throw std::logic_error("empty path");
    return static_cast<int>((positions[0] + start_time) & 1LL);
  }
};

// Backward path: positions indexed downward, positions[k] is the
// location at time start_time - k.
struct DualLatticePath {
  long long start_time = 0;
  std::vector<long long> positions;
  bool tainted = false;

  long long end_time() const {
    return start_time - static_cast<long long>(positions.size()) + 1;
  }
  bool defined_at(long long t) const { return t <= start_time && t >= end_time(); }
  long long at(long long t) const {
    if (!defined_at(t)) throw std::out_of_range("DualLatticePath::at");
    return positions[static_cast<std::size_t>(start_time - t)];
  }
};

struct Site {
  long long x = 0;
  long long t = 0;
};

namespace detail {

template <class Field>
LatticePath extract_forward(const Field& field, Site z, bool prefer_left,
                            long long t_end) {
  if (!lattice::is_forward_site(z.x, z.t))
    throw ParityError("extract_forward: start is not a forward site");
  if (!field.in_window(z.x, z.t))
    throw std::out_of_range("extract_forward: start outside window");
  LatticePath p;
  p.start_time = z.t;
  p.positions.push_back(z.x);
  long long x = z.x;
  for (long long t = z.t; t < t_end; ++t) {
    const Mask m = field.mask(x, t);
    long long step;
    if (prefer_left)
      step = lattice::has_left(m) ? -1 : +1;
    else
      step = lattice::has_right(m) ? +1 : -1;
    const long long nx = x + step;
    if (nx < field.config().x_lo || nx > field.config().x_hi) {
      p.tainted = true;
      break;
    }
    p.positions.push_back(nx);
    x = nx;
  }
  return p;
}

// Dual extremal extraction. Going down from a dual site (y,s), the step
// to time s-1 uses the dual mask at (y,s). A dual left-most path is the
// one whose forward-time drift matches forward left-most paths; under
// the 180-degree symmetry it takes the dual RIGHT arrow whenever
// available, and the dual right-most path takes the dual LEFT arrow.
template <class Field>
DualLatticePath extract_dual(const Field& field, Site zhat, bool leftmost,
                             long long t_end) {
  if (!lattice::is_dual_site(zhat.x, zhat.t))
    throw ParityError("extract_dual: start is not a dual site");
  if (!field.dual_in_window(zhat.x, zhat.t))
    throw std::out_of_range("extract_dual: start outside window");
  DualLatticePath p;
  p.start_time = zhat.t;
  p.positions.push_back(zhat.x);
  long long x = zhat.x;
  for (long long t = zhat.t; t > t_end; --t) {
    const Mask dm = field.dual_mask(x, t);
    long long step;
    if (leftmost)
      step = lattice::has_right(dm) ? +1 : -1;
    else
      step = lattice::has_left(dm) ? -1 : +1;
    const long long nx = x + step;
    if (nx < field.config().x_lo || nx > field.config().x_hi) {
      p.tainted = true;
      break;
    }
    p.positions.push_back(nx);
    x = nx;
  }
  return p;
}

}  // namespace detail

template <class Field>
LatticePath leftmost_path(const Field& field, Site z) {
  return detail::extract_forward(field, z, /*prefer_left=*/true,
                                 field.config().t_hi);
}

template <class Field>
LatticePath rightmost_path(const Field& field, Site z) {
  return detail::extract_forward(field, z, /*prefer_left=*/false,
                                 field.config().t_hi);
}

template <class Field>
DualLatticePath dual_leftmost(const Field& field, Site zhat) {
  return detail::extract_dual(field, zhat, /*leftmost=*/true,
                              field.config().t_lo);
}

template <class Field>
DualLatticePath dual_rightmost(const Field& field, Site zhat) {
  return detail::extract_dual(field, zhat, /*leftmost=*/false,
                              field.config().t_lo);
}

// True iff every step of `path` follows an available arrow of `field`.
template <class Field>
bool is_net_path(const Field& field, const LatticePath& path) {
  if (path.positions.empty()) return false;
  long long t = path.start_time;
  if (!lattice::is_forward_site(path.positions[0], t)) return false;
  for (std::size_t i = 0; i + 1 < path.positions.size(); ++i) {
    const long long x = path.positions[i];
    const long long nx = path.positions[i + 1];
    const long long d = nx - x;
    if (d != 1 && d != -1) return false;
    if (!field.in_window(x, t + static_cast<long long>(i))) return false;
    const Mask m = field.mask(x, t + static_cast<long long>(i));
    if (d == 1 && !lattice::has_right(m)) return false;
    if (d == -1 && !lattice::has_left(m)) return false;
  }
  return true;
}

// Concatenate p1 up to t_hop with p2 from t_hop on. The hop time must be
// a true intersection time: strictly after both starting times, with
// equal positions.
inline LatticePath hop_concatenate(const LatticePath& p1, const LatticePath& p2,
                                   long long t_hop) {
  if (!(t_hop > std::max(p1.start_time, p2.start_time)))
    throw std::invalid_argument("hop_concatenate: hop time not strictly after both starts");
  if (!p1.defined_at(t_hop) || !p2.defined_at(t_hop))
    throw std::invalid_argument("hop_concatenate: hop time outside a path");
  if (p1.at(t_hop) != p2.at(t_hop))
    throw std::invalid_argument("hop_concatenate: positions disagree at hop time");
  LatticePath out;
  out.start_time = p1.start_time;
  out.tainted = p1.tainted || p2.tainted;
  out.positions.assign(p1.positions.begin(),
                       p1.positions.begin() + static_cast<std::ptrdiff_t>(t_hop - p1.start_time + 1));
  for (long long t = t_hop + 1; t <= p2.end_time(); ++t)
    out.positions.push_back(p2.at(t));
  return out;
}

// Smallest t > max of the starting times with p1(t) = p2(t).
inline std::optional<long long> first_meeting_time(const LatticePath& p1,
                                                   const LatticePath& p2) {
  if (p1.parity() != p2.parity())
    throw ParityError("first_meeting_time: paths on disjoint parity classes");
  const long long lo = std::max(p1.start_time, p2.start_time) + 1;
  const long long hi = std::min(p1.end_time(), p2.end_time());
  for (long long t = lo; t <= hi; ++t)
    if (p1.at(t) == p2.at(t)) return t;
  return std::nullopt;
}

struct ReflectedPath {
  LatticePath path;
  std::vector<long long> reflection_times;
};

// Maximal net path from z staying left of the dual path `pihat` up to
// its starting time (contact convention: x <= pihat(s) - 1). Taking the
// right arrow is refused exactly when it would cross pihat; those
// refusals at branching sites are the reflection times, and between
// consecutive reflection times the result follows plain right-most
// steps.
template <class Field>
ReflectedPath reflected_rightmost(const Field& field, Site z,
                                  const DualLatticePath& pihat) {
  if (!lattice::is_forward_site(z.x, z.t))
    throw ParityError("reflected_rightmost: start is not a forward site");
  if (pihat.defined_at(z.t) && z.x > pihat.at(z.t))
    throw std::domain_error("reflected_rightmost: start strictly right of dual path");

  ReflectedPath out;
  out.path.start_time = z.t;
  out.path.positions.push_back(z.x);
  long long x = z.x;
  for (long long t = z.t; t < field.config().t_hi; ++t) {
    const Mask m = field.mask(x, t);
    const bool constrained = pihat.defined_at(t + 1);
    bool right_blocked = false;
    if (constrained && lattice::has_right(m))
      right_blocked = (x + 1 > pihat.at(t + 1) - 1);
    long long step;
    if (lattice::has_right(m) && !right_blocked) {
      step = +1;
    } else if (lattice::has_left(m)) {
      step = -1;
      if (right_blocked && m == Mask::Both && pihat.defined_at(t) &&
          x == pihat.at(t) - 1) {
        out.reflection_times.push_back(t);
      }
    } else {
      // A right-only site whose right step would cross: cannot happen
      // when pihat follows dual arrows.
      throw std::domain_error("reflected_rightmost: no admissible continuation");
    }
    const long long nx = x + step;
    if (nx < field.config().x_lo || nx > field.config().x_hi) {
      out.path.tainted = true;
      break;
    }
    out.path.positions.push_back(nx);
    x = nx;
  }
  return out;
}

// ---------------------------------------------------------------------
// Metrics on the compactified plane and on paths.

struct CompactPoint {
  double x = 0.0;
  double t = 0.0;
};

// Metric on the compactified plane.
inline double point_distance(const CompactPoint& a, const CompactPoint& b) {
  const double dt = std::abs(std::tanh(a.t) - std::tanh(b.t));
  const double dx = std::abs(std::tanh(a.x) / (1.0 + std::abs(a.t)) -
                             std::tanh(b.x) / (1.0 + std::abs(b.t)));
  return std::max(dt, dx);
}

// Diffusive scaling map applied pointwise: (x,t) -> (eps x, eps^2 t).
inline std::vector<CompactPoint> rescale(const LatticePath& p, double epsilon) {
  std::vector<CompactPoint> out;
  out.reserve(p.positions.size());
  for (std::size_t i = 0; i < p.positions.size(); ++i) {
    const double t = static_cast<double>(p.start_time + static_cast<long long>(i));
    out.push_back({epsilon * static_cast<double>(p.positions[i]),
                   epsilon * epsilon * t});
  }
  return out;
}

// A rescaled path: start time and piecewise-linear position function.
struct ScaledPath {
  double start_time = 0.0;
  double knot_dt = 1.0;                 // spacing of position knots
  std::vector<double> positions;        // at start_time + k * knot_dt
  bool empty() const { return positions.empty(); }
  double end_time() const {
    return start_time + knot_dt * static_cast<double>(positions.size() - 1);
  }
  // linear interpolation, constant beyond the last knot
  double at(double t) const {
    if (t <= start_time) return positions.front();
    const double u = (t - start_time) / knot_dt;
    const auto k = static_cast<std::size_t>(u);
    if (k + 1 >= positions.size()) return positions.back();
    const double frac = u - static_cast<double>(k);
    return positions[k] + frac * (positions[k + 1] - positions[k]);
  }
};

inline ScaledPath make_scaled(const LatticePath& p, double epsilon) {
  ScaledPath s;
  s.start_time = epsilon * epsilon * static_cast<double>(p.start_time);
  s.knot_dt = epsilon * epsilon;
  s.positions.reserve(p.positions.size());
  for (long long x : p.positions)
    s.positions.push_back(epsilon * static_cast<double>(x));
  return s;
}

// Path metric: |tanh(s1)-tanh(s2)| v sup_t |tanh(p1(t v s1))/(1+|t|) -
// tanh(p2(t v s2))/(1+|t|)|; the supremum is evaluated on a refinement
// of the knot grid (the integrand is smooth between knots), with paths
// extended as constants beyond their last knot, where the integrand is
// monotone decreasing in |t|.
inline double path_distance(const ScaledPath& p1, const ScaledPath& p2) {
  if (p1.empty() || p2.empty())
    throw std::invalid_argument("path_distance: empty path");
  const double start_term =
      std::abs(std::tanh(p1.start_time) - std::tanh(p2.start_time));
  const double t0 = std::min(p1.start_time, p2.start_time);
  // beyond the last knot both paths are constant and the weight
  // 1/(1+|t|) is monotone away from 0, so scanning up to max(end, 0)
  // captures the supremum over the whole half-line
  const double t1 = std::max(std::max(p1.end_time(), p2.end_time()), 0.0);
  const auto value = [&](double t) {
    const double a = std::tanh(p1.at(std::max(t, p1.start_time)));
    const double b = std::tanh(p2.at(std::max(t, p2.start_time)));
    return std::abs(a - b) / (1.0 + std::abs(t));
  };
  double sup = value(t0);
  if (t1 > t0) {
    const double dt_knot = std::min(p1.knot_dt, p2.knot_dt);
    const long long refine = 16;
    const double step = dt_knot / static_cast<double>(refine);
    const auto n = static_cast<long long>(std::ceil((t1 - t0) / step));
    for (long long k = 1; k <= n; ++k) {
      const double t = std::min(t0 + step * static_cast<double>(k), t1);
      sup = std::max(sup, value(t));
    }
  }
  return std::max(start_term, sup);
}

inline double path_distance(const LatticePath& p1, const LatticePath& p2,
                            double epsilon) {
  return path_distance(make_scaled(p1, epsilon), make_scaled(p2, epsilon));
}

// Two-sided Hausdorff distance between finite path sets.
inline double hausdorff_distance(const std::vector<ScaledPath>& k1,
                                 const std::vector<ScaledPath>& k2) {
  if (k1.empty() || k2.empty())
    throw std::invalid_argument("hausdorff_distance: empty set");
  double h = 0.0;
  const auto one_sided = [&](const std::vector<ScaledPath>& a,
                             const std::vector<ScaledPath>& b) {
    double worst = 0.0;
    for (const auto& pa : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& pb : b) best = std::min(best, path_distance(pa, pb));
      worst = std::max(worst, best);
    }
    return worst;
  };
  h = std::max(one_sided(k1, k2), one_sided(k2, k1));
  return h;
}

}  // namespace bnet::paths
