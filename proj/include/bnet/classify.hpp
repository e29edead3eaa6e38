#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bnet/lattice.hpp"
#include "bnet/paths.hpp"
#include "bnet/report.hpp"
#include "bnet/rng.hpp"
#include "bnet/stats.hpp"

// Site classification, reachable sets, relevant separation points,
// wedge/mesh predicates, and the component decomposition of the region
// not covered by paths started at a fixed time.

namespace bnet::classify {

using lattice::ArrowField;
using lattice::LatticeConfig;
using lattice::Mask;
using paths::DualLatticePath;
using paths::LatticePath;
using paths::Site;

// ---------------------------------------------------------------------
// Reachable sets

// Occupied positions of all net paths started from every site at time s.
class ReachableSet {
 public:
  template <class Field>
  ReachableSet(const Field& field, long long s) {
    const auto& c = field.config();
    if (s < c.t_lo || s > c.t_hi)
      throw std::out_of_range("ReachableSet: start time outside window");
    x_lo_ = c.x_lo;
    start_ = s;
    const auto slots = static_cast<std::size_t>(c.width());
    rows_.assign(static_cast<std::size_t>(c.t_hi - s + 1),
                 std::vector<char>(slots, 0));
    for (long long x = c.x_lo; x <= c.x_hi; ++x)
      if (lattice::is_forward_site(x, s)) cell(s, x) = 1;
    for (long long t = s; t < c.t_hi; ++t) {
      for (long long x = c.x_lo; x <= c.x_hi; ++x) {
        if (!lattice::is_forward_site(x, t) || !cell(t, x)) continue;
        const Mask m = field.mask(x, t);
        if (lattice::has_left(m) && x - 1 >= c.x_lo) cell(t + 1, x - 1) = 1;
        if (lattice::has_right(m) && x + 1 <= c.x_hi) cell(t + 1, x + 1) = 1;
      }
    }
  }

  long long start_time() const { return start_; }
  bool occupied(long long x, long long t) const {
    if (t < start_ || t - start_ >= static_cast<long long>(rows_.size()))
      return false;
    if (x < x_lo_ || x - x_lo_ >= static_cast<long long>(rows_[0].size()))
      return false;
    return cell(t, x) != 0;
  }
  // occupied positions at a given time slice
  std::vector<long long> slice(long long t) const {
    std::vector<long long> out;
    const auto& row = rows_.at(static_cast<std::size_t>(t - start_));
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) out.push_back(x_lo_ + static_cast<long long>(i));
    return out;
  }

 private:
  char& cell(long long t, long long x) {
    return rows_[static_cast<std::size_t>(t - start_)]
                [static_cast<std::size_t>(x - x_lo_)];
  }
  char cell(long long t, long long x) const {
    return rows_[static_cast<std::size_t>(t - start_)]
                [static_cast<std::size_t>(x - x_lo_)];
  }
  long long x_lo_ = 0, start_ = 0;
  std::vector<std::vector<char>> rows_;
};

// Dual analogue: positions of dual paths started from every dual site at
// time s_hat, swept downward.
class DualReachableSet {
 public:
  template <class Field>
  DualReachableSet(const Field& field, long long s_hat) {
    const auto& c = field.config();
    if (s_hat - 1 < c.t_lo || s_hat - 1 > c.t_hi)
      throw std::out_of_range("DualReachableSet: start time outside window");
    x_lo_ = c.x_lo;
    bottom_ = c.t_lo;
    start_ = s_hat;
    const auto slots = static_cast<std::size_t>(c.width());
    rows_.assign(static_cast<std::size_t>(s_hat - bottom_ + 1),
                 std::vector<char>(slots, 0));
    for (long long x = c.x_lo; x <= c.x_hi; ++x)
      if (lattice::is_dual_site(x, s_hat)) cell(s_hat, x) = 1;
    for (long long t = s_hat; t > bottom_; --t) {
      for (long long x = c.x_lo; x <= c.x_hi; ++x) {
        if (!lattice::is_dual_site(x, t) || !cell(t, x)) continue;
        if (!field.dual_in_window(x, t)) continue;
        const Mask dm = field.dual_mask(x, t);
        if (lattice::has_left(dm) && x - 1 >= c.x_lo) cell(t - 1, x - 1) = 1;
        if (lattice::has_right(dm) && x + 1 <= c.x_hi) cell(t - 1, x + 1) = 1;
      }
    }
  }

  bool occupied(long long x, long long t) const {
    if (t > start_ || t < bottom_) return false;
    if (x < x_lo_ || x - x_lo_ >= static_cast<long long>(rows_[0].size()))
      return false;
    return cell(t, x) != 0;
  }

 private:
  char& cell(long long t, long long x) {
    return rows_[static_cast<std::size_t>(t - bottom_)]
                [static_cast<std::size_t>(x - x_lo_)];
  }
  char cell(long long t, long long x) const {
    return rows_[static_cast<std::size_t>(t - bottom_)]
                [static_cast<std::size_t>(x - x_lo_)];
  }
  long long x_lo_ = 0, bottom_ = 0, start_ = 0;
  std::vector<std::vector<char>> rows_;
};

// ---------------------------------------------------------------------
// Census

enum class SiteKind : std::uint8_t { Plain, Meeting, Separation, Crossing };

struct SiteCensus {
  long long x = 0, t = 0;
  SiteKind kind = SiteKind::Plain;
  int m_in = 0, m_out = 0;
  int dual_m_in = 0, dual_m_out = 0;
};

struct Box {
  long long x_lo = 0, x_hi = 0, t_lo = 0, t_hi = 0;
  bool contains(long long x, long long t) const {
    return x >= x_lo && x <= x_hi && t >= t_lo && t <= t_hi;
  }
};

// A site is boundary-tainted when information from outside the sampled
// window could have reached it (or its dual twin) within the light cone.
template <class Field>
bool boundary_tainted(const Field& field, long long x, long long t) {
  const auto& c = field.config();
  const long long up = t - c.t_lo;
  const long long down = c.t_hi - t;
  const long long reach = std::max(up, down) + 1;
  return (x - c.x_lo) < reach || (c.x_hi - x) < reach;
}

// Occupied incoming forward arrows at (x,t), given occupancy at t-1.
template <class Field>
int in_degree(const Field& field, const ReachableSet& occ, long long x,
              long long t) {
  int deg = 0;
  const auto& c = field.config();
  if (t - 1 >= occ.start_time() && t - 1 >= c.t_lo) {
    if (x - 1 >= c.x_lo && occ.occupied(x - 1, t - 1) &&
        field.arrow_right(x - 1, t - 1))
      ++deg;
    if (x + 1 <= c.x_hi && occ.occupied(x + 1, t - 1) &&
        field.arrow_left(x + 1, t - 1))
      ++deg;
  }
  return deg;
}

// The local order-swap test for a crossing at z: the right-most step out
// of z and the dual left-most step over z swap the order of the two
// paths. The forward right-most path from z steps right iff the site
// has a right arrow; the dual left-most path through (x,t+1) steps to
// x+1 iff the dual site has a right arrow, i.e. iff the forward site
// has a left arrow. Both hold exactly at branching sites.
template <class Field>
bool crossing_at(const Field& field, long long x, long long t) {
  const Mask m = field.mask(x, t);
  return lattice::has_right(m) && lattice::has_left(m);
}

// Per-site tags over `window`, using occupancy from the window's bottom
// slice and dual occupancy from its top slice. Boundary-tainted sites
// are excluded.
template <class Field>
std::vector<SiteCensus> census(const Field& field, const Box& window) {
  const auto& c = field.config();
  ReachableSet occ(field, c.t_lo);
  DualReachableSet docc(field, c.t_hi + 1);
  std::vector<SiteCensus> out;
  for (long long t = std::max(window.t_lo, c.t_lo);
       t <= std::min(window.t_hi, c.t_hi); ++t) {
    for (long long x = std::max(window.x_lo, c.x_lo);
         x <= std::min(window.x_hi, c.x_hi); ++x) {
      if (!lattice::is_forward_site(x, t)) continue;
      if (boundary_tainted(field, x, t)) continue;
      SiteCensus sc;
      sc.x = x;
      sc.t = t;
      const Mask m = field.mask(x, t);
      sc.m_in = in_degree(field, occ, x, t);
      sc.m_out = (m == Mask::Both) ? 2 : 1;
      sc.dual_m_out = sc.m_out;  // mirror preserves branching
      // dual incoming arrows at the twin (x, t+1), using dual occupancy
      int din = 0;
      if (field.dual_in_window(x - 1, t + 2) && docc.occupied(x - 1, t + 2) &&
          lattice::has_right(field.dual_mask(x - 1, t + 2)))
        ++din;
      if (field.dual_in_window(x + 1, t + 2) && docc.occupied(x + 1, t + 2) &&
          lattice::has_left(field.dual_mask(x + 1, t + 2)))
        ++din;
      sc.dual_m_in = din;
      if (m == Mask::Both)
        sc.kind = SiteKind::Separation;
      else if (sc.m_in == 2)
        sc.kind = SiteKind::Meeting;
      else
        sc.kind = SiteKind::Plain;
      out.push_back(sc);
    }
  }
  return out;
}

template <class Field>
ReachableSet reachable_set(const Field& field, long long s) {
  return ReachableSet(field, s);
}

// ---------------------------------------------------------------------
// Relevant separation points

// Branching sites z=(x,t), s < t < u, reachable from time s, whose
// outgoing left-most and right-most paths do not meet in (t,u).
template <class Field>
std::vector<Site> relevant_separation_points(const Field& field, long long s,
                                             long long u) {
  const auto& c = field.config();
  if (!(s < u) || s < c.t_lo || u > c.t_hi)
    throw std::out_of_range("relevant_separation_points: need t_lo<=s<u<=t_hi");
  ReachableSet occ(field, s);
  std::vector<Site> out;
  for (long long t = s + 1; t < u; ++t) {
    for (long long x = c.x_lo; x <= c.x_hi; ++x) {
      if (!lattice::is_forward_site(x, t)) continue;
      if (!occ.occupied(x, t)) continue;
      if (field.mask(x, t) != Mask::Both) continue;
      // follow the two extremal paths until they meet or reach u
      long long xl = x, xr = x;
      bool met = false;
      for (long long w = t; w < u; ++w) {
        xl += field.arrow_left(xl, w) ? -1 : +1;
        xr += field.arrow_right(xr, w) ? +1 : -1;
        if (xl < c.x_lo || xr > c.x_hi) break;  // tainted; caller widens window
        if (xl == xr && w + 1 < u) {
          met = true;
          break;
        }
      }
      if (!met) out.push_back({x, t});
    }
  }
  return out;
}

// Monte Carlo estimate of the rescaled count of (s,u)-relevant
// separation points in [a,b] x [s,u] (arguments in rescaled units),
// against the quadrature reference.
struct RelevantDensityConfig {
  double epsilon = 0.05;
  double s = 0.0, u = 1.0;
  double a = 0.0, b = 1.0;
  std::uint64_t seed = 0;
};

inline stats::EstimateReport relevant_density_estimate_reduce(
    const std::vector<double>& counts, const RelevantDensityConfig& rc) {
  stats::EstimateReport rep = stats::mc_mean(counts);
  rep.set_reference(stats::relevant_density_integral(rc.s, rc.s, rc.u, rc.u,
                                                     rc.a, rc.b));
  if (rc.s == rc.u || counts.empty()) rep.tainted = counts.empty();
  return rep;
}

// One replicate: builds a margin-padded field and counts relevant
// separation points inside the rescaled box.
inline double relevant_density_replicate(const RelevantDensityConfig& rc,
                                         std::uint64_t replicate) {
  const double eps = rc.epsilon;
  const long long t_lo = 0;
  const long long lat_s = static_cast<long long>(rc.s / (eps * eps) + 0.5);
  const long long lat_u = static_cast<long long>(rc.u / (eps * eps) + 0.5);
  const long long lat_a = static_cast<long long>(std::floor(rc.a / eps));
  const long long lat_b = static_cast<long long>(std::ceil(rc.b / eps));
  const long long margin = lat_u - lat_s + 2;  // light cone of the time span
  LatticeConfig lc;
  lc.epsilon = eps;
  lc.t_lo = t_lo;
  lc.t_hi = lat_u;
  lc.x_lo = lat_a - margin;
  lc.x_hi = lat_b + margin;
  if (((lc.x_hi - lc.x_lo) & 1LL) != 0) ++lc.x_hi;
  lc.seed = rng::stream_seed(rc.seed, replicate);
  const ArrowField field = ArrowField::sample(lc);
  const auto pts = relevant_separation_points(field, lat_s, lat_u);
  double count = 0.0;
  for (const auto& z : pts) {
    const double rx = eps * static_cast<double>(z.x);
    if (rx >= rc.a && rx <= rc.b) count += 1.0;
  }
  return count;
}

// ---------------------------------------------------------------------
// Point-set density

// Density of the point set of paths started from the full line, per
// unit rescaled length, measured at rescaled time `time`. Reference:
// stats::psi(time).
struct DensityPsiConfig {
  double epsilon = 0.05;
  double time = 1.0;       // rescaled
  double width = 40.0;     // rescaled width of the counting box
  std::uint64_t seed = 0;
};

inline double density_psi_replicate(const DensityPsiConfig& dc,
                                    std::uint64_t replicate) {
  const double eps = dc.epsilon;
  const long long T = static_cast<long long>(dc.time / (eps * eps) + 0.5);
  const long long halfw = static_cast<long long>(0.5 * dc.width / eps + 0.5);
  const long long margin = T + 1;  // light cone
  const long long x_lo = -halfw - margin, x_hi = halfw + margin;
  const lattice::LazyField field(eps, rng::stream_seed(dc.seed, replicate));
  const auto slots = static_cast<std::size_t>(x_hi - x_lo + 1);
  std::vector<char> cur(slots, 0), nxt(slots, 0);
  for (long long x = x_lo; x <= x_hi; ++x)
    if (lattice::is_forward_site(x, 0)) cur[static_cast<std::size_t>(x - x_lo)] = 1;
  for (long long t = 0; t < T; ++t) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (long long x = x_lo; x <= x_hi; ++x) {
      if (!cur[static_cast<std::size_t>(x - x_lo)]) continue;
      const Mask m = field.mask(x, t);
      if (lattice::has_left(m) && x - 1 >= x_lo)
        nxt[static_cast<std::size_t>(x - 1 - x_lo)] = 1;
      if (lattice::has_right(m) && x + 1 <= x_hi)
        nxt[static_cast<std::size_t>(x + 1 - x_lo)] = 1;
    }
    cur.swap(nxt);
  }
  long long count = 0;
  for (long long x = -halfw; x <= halfw; ++x)
    if (cur[static_cast<std::size_t>(x - x_lo)]) ++count;
  const double rescaled_len = 2.0 * static_cast<double>(halfw) * eps;
  return static_cast<double>(count) / rescaled_len;
}

// ---------------------------------------------------------------------
// Wedges and meshes

struct Wedge {
  DualLatticePath r_hat;  // dual right-most: the left wall
  DualLatticePath l_hat;  // dual left-most: the right wall
  std::optional<long long> bottom_time;

  long long top_time() const {
    return std::min(r_hat.start_time, l_hat.start_time);
  }

  void validate() const {
    const long long top = top_time();
    if (!r_hat.defined_at(top) || !l_hat.defined_at(top) ||
        !(r_hat.at(top) < l_hat.at(top)))
      throw std::invalid_argument("Wedge: need r_hat < l_hat at the joint start");
  }

  // first backward hitting time below the joint start
  static std::optional<long long> hitting_time(const DualLatticePath& r_hat,
                                               const DualLatticePath& l_hat) {
    const long long top = std::min(r_hat.start_time, l_hat.start_time);
    const long long bottom = std::max(r_hat.end_time(), l_hat.end_time());
    for (long long t = top; t >= bottom; --t)
      if (r_hat.at(t) == l_hat.at(t)) return t;
    return std::nullopt;
  }

  static Wedge make(DualLatticePath r_hat, DualLatticePath l_hat) {
    Wedge w{std::move(r_hat), std::move(l_hat), std::nullopt};
    w.validate();
    w.bottom_time = hitting_time(w.r_hat, w.l_hat);
    return w;
  }

  // open region: bottom_time < u < top, r_hat(u) < x < l_hat(u)
  bool interior(long long x, long long u) const {
    const long long top = top_time();
    if (bottom_time && u <= *bottom_time) return false;
    if (!(u < top)) return false;
    if (!r_hat.defined_at(u) || !l_hat.defined_at(u)) return false;
    return r_hat.at(u) < x && x < l_hat.at(u);
  }

  // closure: includes the boundary walls, contact positions one step
  // outside them, the bottom point and the top slice
  bool closure(long long x, long long u) const {
    const long long top = top_time();
    if (bottom_time && u < *bottom_time) return false;
    if (u > top) return false;
    if (!r_hat.defined_at(u) || !l_hat.defined_at(u)) return false;
    return r_hat.at(u) - 1 <= x && x <= l_hat.at(u) + 1;
  }
};

// Literal reading of "enters from outside": some s < t with path(s)
// outside the closure and path(t) in the open region.
inline bool wedge_entered_from_outside(const LatticePath& path, const Wedge& w) {
  bool seen_outside = false;
  for (long long t = path.start_time; t <= path.end_time(); ++t) {
    const long long x = path.at(t);
    if (seen_outside && w.interior(x, t)) return true;
    if (!w.closure(x, t)) seen_outside = true;
  }
  return false;
}

struct Mesh {
  LatticePath r;  // right-most path: the left boundary
  LatticePath l;  // left-most path: the right boundary
  long long bottom_time = 0;
  long long top_time = 0;

  void validate() const {
    if (r.start_time != l.start_time || r.at(r.start_time) != l.at(l.start_time))
      throw std::invalid_argument("Mesh: boundaries must share the bottom point");
    if (!(bottom_time == r.start_time && top_time > bottom_time))
      throw std::invalid_argument("Mesh: bad bottom/top times");
    if (!r.defined_at(top_time) || !l.defined_at(top_time))
      throw std::invalid_argument("Mesh: boundaries end before the top time");
    for (long long t = bottom_time + 1; t < top_time; ++t)
      if (!(r.at(t) < l.at(t)))
        throw std::invalid_argument("Mesh: need r < l strictly inside");
  }

  bool interior(long long x, long long u) const {
    if (!(bottom_time < u && u < top_time)) return false;
    return r.at(u) < x && x < l.at(u);
  }
};

// Meshes use plain "enters": path(s) outside the open region, path(t)
// inside it, s < t.
inline bool mesh_entered(const LatticePath& path, const Mesh& mesh) {
  bool seen_outside = false;
  for (long long t = path.start_time; t <= path.end_time(); ++t) {
    const long long x = path.at(t);
    if (seen_outside && mesh.interior(x, t)) return true;
    if (!mesh.interior(x, t)) seen_outside = true;
  }
  return false;
}

// ---------------------------------------------------------------------
// Components of the complement of the image set

// Unit cells [cx,cx+1] x [ct,ct+1]. Each cell is crossed by at most one
// step segment of a path started at time T: the one from its unique
// even-parity bottom corner.
struct CellRegion {
  long long t0 = 0;                       // cells span rows t0 .. t0+rows-1
  long long x_lo = 0;
  std::vector<std::vector<char>> covered;  // [row][cx - x_lo]
};

template <class Field>
CellRegion cover_cells(const Field& field, const ReachableSet& occ,
                       long long T) {
  const auto& c = field.config();
  CellRegion reg;
  reg.t0 = T;
  reg.x_lo = c.x_lo;
  const auto cols = static_cast<std::size_t>(c.x_hi - c.x_lo);
  reg.covered.assign(static_cast<std::size_t>(c.t_hi - T), std::vector<char>(cols, 0));
  for (long long t = T; t < c.t_hi; ++t) {
    for (long long cx = c.x_lo; cx < c.x_hi; ++cx) {
      const long long y = lattice::is_forward_site(cx, t) ? cx : cx + 1;
      bool cov = false;
      if (y <= c.x_hi && occ.occupied(y, t)) {
        const Mask m = field.mask(y, t);
        cov = (y == cx) ? lattice::has_right(m) : lattice::has_left(m);
      }
      reg.covered[static_cast<std::size_t>(t - T)]
                 [static_cast<std::size_t>(cx - c.x_lo)] = cov ? 1 : 0;
    }
  }
  return reg;
}

struct MeshComponent {
  std::vector<std::pair<long long, long long>> cells;  // (cx, ct)
  bool touches_top = false;
  bool touches_side = false;
  LatticePath left_boundary, right_boundary;
  bool boundaries_extracted = false;
};

// 4-adjacent components of uncovered cells in t >= T.
template <class Field>
std::vector<MeshComponent> t_mesh_components(const Field& field, long long T) {
  const auto& c = field.config();
  ReachableSet occ(field, T);
  const CellRegion reg = cover_cells(field, occ, T);
  const long long rows = static_cast<long long>(reg.covered.size());
  const long long cols = rows ? static_cast<long long>(reg.covered[0].size()) : 0;
  std::vector<std::vector<char>> seen(reg.covered.size(),
                                      std::vector<char>(static_cast<std::size_t>(cols), 0));
  std::vector<MeshComponent> out;
  for (long long r = 0; r < rows; ++r) {
    for (long long q = 0; q < cols; ++q) {
      if (reg.covered[r][q] || seen[r][q]) continue;
      MeshComponent comp;
      std::deque<std::pair<long long, long long>> frontier{{r, q}};
      seen[r][q] = 1;
      while (!frontier.empty()) {
        auto [cr, cq] = frontier.front();
        frontier.pop_front();
        comp.cells.emplace_back(reg.x_lo + cq, reg.t0 + cr);
        if (cr == rows - 1) comp.touches_top = true;
        if (cq == 0 || cq == cols - 1) comp.touches_side = true;
        const std::pair<long long, long long> nb[4] = {
            {cr - 1, cq}, {cr + 1, cq}, {cr, cq - 1}, {cr, cq + 1}};
        for (auto [nr, nq] : nb) {
          if (nr < 0 || nr >= rows || nq < 0 || nq >= cols) continue;
          if (seen[nr][nq] || reg.covered[nr][nq]) continue;
          seen[nr][nq] = 1;
          frontier.emplace_back(nr, nq);
        }
      }
      std::sort(comp.cells.begin(), comp.cells.end(),
                [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second
                                              : a.first < b.first;
                });
      out.push_back(std::move(comp));
    }
  }

  // boundary paths: for each row of a component, the covering segments
  // immediately left of the leftmost cell and right of the rightmost
  for (auto& comp : out) {
    if (comp.touches_side || comp.cells.empty()) continue;
    const long long bot = comp.cells.front().second;
    const long long top = comp.cells.back().second;
    std::vector<long long> lm, rm;  // per-row extreme cell columns
    bool rows_ok = true;
    for (long long t = bot; t <= top && rows_ok; ++t) {
      long long mn = std::numeric_limits<long long>::max();
      long long mx = std::numeric_limits<long long>::min();
      for (const auto& [cx, ct] : comp.cells) {
        if (ct != t) continue;
        mn = std::min(mn, cx);
        mx = std::max(mx, cx);
      }
      if (mn > mx) { rows_ok = false; break; }
      lm.push_back(mn);
      rm.push_back(mx);
    }
    if (!rows_ok) continue;
    // segment through the cell just left of column lm[k] at row bot+k
    // runs from its even corner; record endpoint positions
    const auto segment = [&](long long cell_x, long long t) {
      const long long y = lattice::is_forward_site(cell_x, t) ? cell_x : cell_x + 1;
      // position at t is y; at t+1 it is the other cell corner
      const long long other = (y == cell_x) ? cell_x + 1 : cell_x;
      return std::pair<long long, long long>{y, other};
    };
    LatticePath left, right;
    left.start_time = bot;
    right.start_time = bot;
    bool contiguous = true;
    for (std::size_t k = 0; k < lm.size(); ++k) {
      const long long t = bot + static_cast<long long>(k);
      const auto [a, b] = segment(lm[k] - 1, t);
      const auto [a2, b2] = segment(rm[k] + 1, t);
      if (k == 0) {
        left.positions = {a, b};
        right.positions = {a2, b2};
      } else {
        if (left.positions.back() != a || right.positions.back() != a2) {
          contiguous = false;
          break;
        }
        left.positions.push_back(b);
        right.positions.push_back(b2);
      }
    }
    if (contiguous) {
      comp.left_boundary = std::move(left);
      comp.right_boundary = std::move(right);
      comp.boundaries_extracted = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// Classification by incoming paths

enum class IncomingType : std::uint8_t { Co, Cm, Cs, Cp };

// C_o: no net path from time t - lookback reaches z. C_s: reachable
// branching site. C_m: two occupied incoming arrows. C_p: otherwise
// with an incoming path.
template <class Field>
IncomingType incoming_signature(const Field& field, Site z, long long lookback) {
  const auto& c = field.config();
  const long long s = std::max(c.t_lo, z.t - lookback);
  if (!(s < z.t))
    throw std::invalid_argument("incoming_signature: lookback must reach below z");
  ReachableSet occ(field, s);
  const int deg = in_degree(field, occ, z.x, z.t);
  if (!occ.occupied(z.x, z.t) || deg == 0) return IncomingType::Co;
  if (field.mask(z.x, z.t) == Mask::Both) return IncomingType::Cs;
  if (deg == 2) return IncomingType::Cm;
  return IncomingType::Cp;
}

}  // namespace bnet::classify
