#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bnet/classify.hpp"
#include "bnet/lattice.hpp"
#include "bnet/paths.hpp"
#include "bnet/rng.hpp"

// Structural verification harness: exhaustive small-window oracles and
// the randomized property suite behind the `invariants` subcommand.

namespace bnet::invariants {

using classify::Wedge;
using lattice::ArrowField;
using lattice::LatticeConfig;
using lattice::Mask;
using paths::DualLatticePath;
using paths::LatticePath;
using paths::Site;

// ---------------------------------------------------------------------
// Enumeration oracles

// Every arrow-following path from z up to the window top. Branches that
// would leave the spatial window are dropped, so callers should pick z
// inside the safe cone.
template <class Field>
std::vector<LatticePath> enumerate_paths(const Field& field, Site z) {
  const auto& c = field.config();
  std::vector<LatticePath> out;
  std::vector<long long> stack{z.x};
  const auto dfs = [&](auto&& self, long long x, long long t) -> void {
    if (t == c.t_hi) {
      LatticePath p;
      p.start_time = z.t;
      p.positions = stack;
      out.push_back(std::move(p));
      return;
    }
    const Mask m = field.mask(x, t);
    if (lattice::has_left(m) && x - 1 >= c.x_lo) {
      stack.push_back(x - 1);
      self(self, x - 1, t + 1);
      stack.pop_back();
    }
    if (lattice::has_right(m) && x + 1 <= c.x_hi) {
      stack.push_back(x + 1);
      self(self, x + 1, t + 1);
      stack.pop_back();
    }
  };
  dfs(dfs, z.x, z.t);
  return out;
}

// Paths from z staying left of pihat (x <= pihat - 1 wherever defined).
template <class Field>
std::vector<LatticePath> enumerate_admissible(const Field& field, Site z,
                                              const DualLatticePath& pihat) {
  std::vector<LatticePath> out;
  for (auto& p : enumerate_paths(field, z)) {
    bool ok = true;
    for (long long t = p.start_time; t <= p.end_time() && ok; ++t)
      if (pihat.defined_at(t) && p.at(t) > pihat.at(t) - 1) ok = false;
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

inline std::set<std::vector<long long>> as_position_set(
    const std::vector<LatticePath>& ps) {
  std::set<std::vector<long long>> s;
  for (const auto& p : ps) s.insert(p.positions);
  return s;
}

// Closure of {left-most, right-most} continuations under switching
// carriers at intersection times; switches at the continuation's own
// starting time are allowed here, which is what makes the closure fill
// the whole acceptance set at lattice scale.
template <class Field>
std::set<std::vector<long long>> hop_closure(const Field& field, Site z) {
  const long long t_hi = field.config().t_hi;
  std::set<std::vector<long long>> closed;
  std::vector<std::vector<long long>> queue;
  const auto add = [&](const std::vector<long long>& pos) {
    if (closed.insert(pos).second) queue.push_back(pos);
  };
  add(paths::leftmost_path(field, z).positions);
  add(paths::rightmost_path(field, z).positions);
  while (!queue.empty()) {
    const std::vector<long long> p = std::move(queue.back());
    queue.pop_back();
    for (std::size_t i = 1; i < p.size(); ++i) {
      const long long t = z.t + static_cast<long long>(i);
      if (t >= t_hi) break;
      const Site w{p[i], t};
      for (bool left : {true, false}) {
        const LatticePath q = left ? paths::leftmost_path(field, w)
                                   : paths::rightmost_path(field, w);
        std::vector<long long> merged(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i));
        merged.insert(merged.end(), q.positions.begin(), q.positions.end());
        add(merged);
      }
    }
  }
  return closed;
}

// ---------------------------------------------------------------------
// Field-level checks

struct CheckResult {
  bool ok = true;
  std::string failure;

  void fail(const std::string& what) {
    if (ok) {
      ok = false;
      failure = what;
    }
  }
};

// Sites whose full forward cone stays inside the spatial window.
template <class Field>
std::vector<Site> safe_cone_sites(const Field& field) {
  const auto& c = field.config();
  std::vector<Site> out;
  for (long long t = c.t_lo; t <= c.t_hi; ++t) {
    const long long reach = c.t_hi - t;
    for (long long x = c.x_lo + reach; x <= c.x_hi - reach; ++x)
      if (lattice::is_forward_site(x, t)) out.push_back({x, t});
  }
  return out;
}

namespace detail {

inline int order_sign(long long fwd, long long dual) {
  return fwd < dual ? -1 : +1;  // odd difference: never equal
}

template <class Field>
void check_site_sets(const Field& field, const std::vector<Site>& cone,
                     CheckResult& res) {
  for (const Site z : cone) {
    if (!res.ok) return;
    const auto all = enumerate_paths(field, z);
    const auto set = as_position_set(all);
    const auto l = paths::leftmost_path(field, z);
    const auto r = paths::rightmost_path(field, z);
    if (!set.count(l.positions) || !set.count(r.positions))
      res.fail("extremal path missing from enumeration");
    for (const auto& p : all) {
      if (!paths::is_net_path(field, p)) res.fail("enumerated path rejected by is_net_path");
      for (std::size_t i = 0; i < p.positions.size(); ++i)
        if (p.positions[i] < l.positions[i] || p.positions[i] > r.positions[i])
          res.fail("containment between extremal paths violated");
    }
    if (hop_closure(field, z) != set)
      res.fail("hop closure differs from acceptance set");
  }
}

template <class Field>
void check_coalescence_and_duality(const Field& field, CheckResult& res) {
  const auto& c = field.config();
  std::vector<LatticePath> ls, rs;
  std::vector<DualLatticePath> dls;
  for (long long t = c.t_lo; t <= c.t_hi; ++t)
    for (long long x = c.x_lo; x <= c.x_hi; ++x) {
      if (lattice::is_forward_site(x, t)) {
        ls.push_back(paths::leftmost_path(field, {x, t}));
        rs.push_back(paths::rightmost_path(field, {x, t}));
      } else if (field.dual_in_window(x, t)) {
        dls.push_back(paths::dual_leftmost(field, {x, t}));
      }
    }
  // coalescence: left-most paths that meet coincide afterwards
  for (std::size_t i = 0; i < ls.size() && res.ok; ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j) {
      const auto& a = ls[i];
      const auto& b = ls[j];
      const long long lo = std::max(a.start_time, b.start_time);
      const long long hi = std::min(a.end_time(), b.end_time());
      bool met = false;
      for (long long t = lo; t <= hi; ++t) {
        if (met && a.at(t) != b.at(t)) {
          res.fail("left-most paths separated after meeting");
          break;
        }
        if (a.at(t) == b.at(t)) met = true;
      }
    }
  // duality: l never swaps order with dual l; r swaps at most once, at a
  // branching site
  for (const auto& dl : dls) {
    for (const auto& l : ls) {
      const long long lo = std::max(l.start_time, dl.end_time());
      const long long hi = std::min(l.end_time(), dl.start_time);
      if (lo > hi) continue;
      int sign = 0;
      for (long long t = lo; t <= hi; ++t) {
        const int s = order_sign(l.at(t), dl.at(t));
        if (sign != 0 && s != sign) {
          res.fail("left-most path crossed a dual left-most path");
          return;
        }
        sign = s;
      }
    }
    for (const auto& r : rs) {
      const long long lo = std::max(r.start_time, dl.end_time());
      const long long hi = std::min(r.end_time(), dl.start_time);
      if (lo > hi) continue;
      int swaps = 0;
      for (long long t = lo; t < hi; ++t) {
        const int s0 = order_sign(r.at(t), dl.at(t));
        const int s1 = order_sign(r.at(t + 1), dl.at(t + 1));
        if (s0 == -1 && s1 == +1) {
          ++swaps;
          // the interaction site of the swap step must be branching
          if (dl.at(t + 1) != r.at(t) || field.mask(r.at(t), t) != Mask::Both) {
            res.fail("right-most path crossed dual left-most away from a branching site");
            return;
          }
        } else if (s0 == +1 && s1 == -1) {
          res.fail("right-most path crossed a dual left-most path right to left");
          return;
        }
      }
      if (swaps > 1) {
        res.fail("right-most path crossed a dual left-most path twice");
        return;
      }
    }
  }
}

template <class Field>
void check_crossing_equals_separation(const Field& field, CheckResult& res) {
  const auto& c = field.config();
  for (long long t = c.t_lo; t < c.t_hi; ++t)
    for (long long x = c.x_lo + 1; x <= c.x_hi - 1; ++x) {
      if (!lattice::is_forward_site(x, t)) continue;
      // order swap of the right-most path from z against the dual
      // left-most path through (x, t+1)
      const auto r = paths::rightmost_path(field, {x, t});
      const auto dl = paths::dual_leftmost(field, {x, t + 1});
      const bool swap = r.defined_at(t + 1) && dl.defined_at(t) &&
                        detail::order_sign(r.at(t), dl.at(t)) == -1 &&
                        detail::order_sign(r.at(t + 1), dl.at(t + 1)) == +1;
      const bool separation = field.mask(x, t) == Mask::Both;
      if (swap != separation) {
        res.fail("crossing sites differ from branching sites");
        return;
      }
    }
}

template <class Field>
void check_reachable_and_relevant(const Field& field,
                                  const std::vector<Site>& cone,
                                  CheckResult& res) {
  const auto& c = field.config();
  if (c.t_hi - c.t_lo < 2) return;
  const long long s = c.t_lo;
  const classify::ReachableSet occ(field, s);
  // oracle: positions covered by enumerated paths from the full slice
  std::set<std::pair<long long, long long>> covered;
  for (long long x = c.x_lo; x <= c.x_hi; ++x) {
    if (!lattice::is_forward_site(x, s)) continue;
    for (const auto& p : enumerate_paths(field, {x, s}))
      for (long long t = p.start_time; t <= p.end_time(); ++t)
        covered.insert({p.at(t), t});
  }
  // enumeration drops window-exiting branches, so compare inside the
  // safe cone only
  for (const Site z : cone) {
    const bool a = occ.occupied(z.x, z.t);
    const bool b = covered.count({z.x, z.t}) > 0;
    if (a != b) {
      res.fail("reachable set differs from path enumeration");
      return;
    }
  }
  // monotone coupling of relevant separation points: a point relevant
  // for a wide interval stays relevant for any sub-interval containing
  // its time (restriction of the witnessing path, inclusion of the
  // no-meeting window)
  const long long u = c.t_hi;
  if (u - s >= 3) {
    const auto wide = classify::relevant_separation_points(field, s, u);
    const auto narrow = classify::relevant_separation_points(field, s + 1, u - 1);
    std::set<std::pair<long long, long long>> narrow_set;
    for (const auto& z : narrow) narrow_set.insert({z.x, z.t});
    for (const auto& z : wide) {
      if (!(z.t > s + 1 && z.t < u - 1)) continue;
      if (!narrow_set.count({z.x, z.t})) {
        res.fail("relevant separation points not monotone under interval narrowing");
        return;
      }
    }
  }
}

template <class Field>
void check_reflected(const Field& field, const std::vector<Site>& cone,
                     CheckResult& res) {
  const auto& c = field.config();
  for (const Site z : cone) {
    if (!res.ok) return;
    // dual start above and to the right of z
    for (long long dxh : {1LL, 3LL}) {
      const long long xh = z.x + dxh;
      const long long th = c.t_hi;
      if (xh > c.x_hi || !lattice::is_dual_site(xh, th)) continue;
      if (!field.dual_in_window(xh, th)) continue;
      const auto pihat = paths::dual_leftmost(field, {xh, th});
      if (!pihat.defined_at(z.t) || z.x > pihat.at(z.t)) continue;
      const auto refl = paths::reflected_rightmost(field, z, pihat);
      const auto admissible = enumerate_admissible(field, z, pihat);
      if (admissible.empty()) {
        res.fail("no admissible path in enumeration");
        return;
      }
      // pointwise maximum of the admissible set
      std::vector<long long> maxpos = admissible[0].positions;
      for (const auto& p : admissible)
        for (std::size_t i = 0; i < maxpos.size(); ++i)
          maxpos[i] = std::max(maxpos[i], p.positions[i]);
      if (refl.path.positions != maxpos) {
        res.fail("reflected right-most differs from enumeration maximum");
        return;
      }
      // the maximum itself must be admissible (a single path attains it)
      if (!as_position_set(admissible).count(maxpos)) {
        res.fail("pointwise maximum not attained by an admissible path");
        return;
      }
      // segment property: plain right-most between reflection times
      std::vector<long long> cuts = refl.reflection_times;
      cuts.push_back(refl.path.end_time());
      long long seg_start = z.t;
      for (const long long cut : cuts) {
        const Site w{refl.path.at(seg_start), seg_start};
        const auto rm = paths::rightmost_path(field, w);
        for (long long t = seg_start; t <= cut; ++t)
          if (rm.at(t) != refl.path.at(t)) {
            res.fail("reflected path deviates from right-most between reflections");
            return;
          }
        if (cut < refl.path.end_time()) seg_start = cut + 1;
      }
      // reflection times: branching contacts where the right arrow is blocked
      for (const long long t : refl.reflection_times) {
        const long long x = refl.path.at(t);
        if (field.mask(x, t) != Mask::Both || pihat.at(t) != x + 1 ||
            pihat.at(t + 1) != x) {
          res.fail("reflection time not a blocked branching contact");
          return;
        }
      }
    }
  }
}

template <class Field>
bool wedge_reachably_entered(const Field& field, const Wedge& w) {
  const auto& c = field.config();
  // sites outside the closure reachable by some path started earlier
  std::vector<std::vector<char>> reach(
      static_cast<std::size_t>(c.height()),
      std::vector<char>(static_cast<std::size_t>(c.width()), 0));
  const auto idx = [&](long long x, long long t) -> char& {
    return reach[static_cast<std::size_t>(t - c.t_lo)]
                [static_cast<std::size_t>(x - c.x_lo)];
  };
  for (long long t = c.t_lo + 1; t <= c.t_hi; ++t)
    for (long long x = c.x_lo; x <= c.x_hi; ++x) {
      if (!lattice::is_forward_site(x, t) || w.closure(x, t)) continue;
      const bool incoming =
          (x - 1 >= c.x_lo && field.arrow_right(x - 1, t - 1)) ||
          (x + 1 <= c.x_hi && field.arrow_left(x + 1, t - 1));
      if (incoming) idx(x, t) = 1;
    }
  for (long long t = c.t_lo; t < c.t_hi; ++t)
    for (long long x = c.x_lo; x <= c.x_hi; ++x) {
      if (!lattice::is_forward_site(x, t) || !idx(x, t)) continue;
      const Mask m = field.mask(x, t);
      if (lattice::has_left(m) && x - 1 >= c.x_lo) idx(x - 1, t + 1) = 1;
      if (lattice::has_right(m) && x + 1 <= c.x_hi) idx(x + 1, t + 1) = 1;
    }
  for (long long t = c.t_lo; t <= c.t_hi; ++t)
    for (long long x = c.x_lo; x <= c.x_hi; ++x)
      if (lattice::is_forward_site(x, t) && idx(x, t) && w.interior(x, t))
        return true;
  return false;
}

template <class Field>
void check_wedges(const Field& field, const std::vector<Site>& cone,
                  CheckResult& res) {
  const auto& c = field.config();
  std::vector<DualLatticePath> dr, dl;
  for (long long t = c.t_lo + 1; t <= c.t_hi; ++t)
    for (long long x = c.x_lo; x <= c.x_hi; ++x)
      if (field.dual_in_window(x, t)) {
        dr.push_back(paths::dual_rightmost(field, {x, t}));
        dl.push_back(paths::dual_leftmost(field, {x, t}));
      }
  std::vector<Wedge> wedges;
  for (const auto& rh : dr)
    for (const auto& lh : dl) {
      if (rh.tainted || lh.tainted) continue;
      const long long top = std::min(rh.start_time, lh.start_time);
      if (!rh.defined_at(top) || !lh.defined_at(top)) continue;
      if (!(rh.at(top) < lh.at(top))) continue;
      wedges.push_back(Wedge::make(rh, lh));
    }
  for (const auto& w : wedges)
    if (wedge_reachably_entered(field, w)) {
      res.fail("a net path enters a wedge from outside");
      return;
    }
  // cross-validate the path-wise predicate on a few wedges
  std::size_t checked = 0;
  for (const auto& w : wedges) {
    if (checked >= 3) break;
    ++checked;
    for (const Site z : cone) {
      for (const auto& p : enumerate_paths(field, z))
        if (classify::wedge_entered_from_outside(p, w)) {
          res.fail("enumerated path enters a wedge from outside");
          return;
        }
    }
  }
}

template <class Field>
void check_census_and_components(const Field& field, CheckResult& res) {
  const auto& c = field.config();
  classify::Box window{c.x_lo, c.x_hi, c.t_lo, c.t_hi};
  for (const auto& sc : classify::census(field, window)) {
    const bool both = field.mask(sc.x, sc.t) == Mask::Both;
    if ((sc.kind == classify::SiteKind::Separation) != both) {
      res.fail("separation tag differs from branching mask");
      return;
    }
    if (both != classify::crossing_at(field, sc.x, sc.t)) {
      res.fail("crossing site set differs from separation site set");
      return;
    }
    if (sc.kind == classify::SiteKind::Meeting && sc.m_out != 1) {
      res.fail("meeting site with more than one outgoing class");
      return;
    }
  }
  for (const auto& comp : classify::t_mesh_components(field, c.t_lo)) {
    if (!comp.boundaries_extracted) continue;
    if (!paths::is_net_path(field, comp.left_boundary) ||
        !paths::is_net_path(field, comp.right_boundary)) {
      res.fail("component boundary is not a net path");
      return;
    }
    const auto rm = paths::rightmost_path(
        field, {comp.left_boundary.positions.front(),
                comp.left_boundary.start_time});
    for (long long t = comp.left_boundary.start_time;
         t <= comp.left_boundary.end_time(); ++t)
      if (!rm.defined_at(t) || rm.at(t) != comp.left_boundary.at(t)) {
        res.fail("left component boundary is not a right-most path");
        return;
      }
  }
}

}  // namespace detail

template <class Field>
CheckResult check_field(const Field& field) {
  CheckResult res;
  const auto cone = safe_cone_sites(field);
  detail::check_site_sets(field, cone, res);
  if (res.ok) detail::check_coalescence_and_duality(field, res);
  if (res.ok) detail::check_crossing_equals_separation(field, res);
  if (res.ok) detail::check_reachable_and_relevant(field, cone, res);
  if (res.ok) detail::check_reflected(field, cone, res);
  if (res.ok) detail::check_wedges(field, cone, res);
  if (res.ok) detail::check_census_and_components(field, res);
  return res;
}

// ---------------------------------------------------------------------
// Randomized suite with shrinking

struct SuiteConfig {
  int cases = 100;
  std::vector<double> epsilons = {0.0, 0.1, 0.5, 1.0};
  std::uint64_t seed = 1;
  int max_row_slots = 11;
  int max_height = 11;
};

struct SuiteResult {
  int cases_run = 0;
  bool ok = true;
  std::string failure;
  std::optional<LatticeConfig> minimal;
  double minimal_epsilon = 0.0;
};

namespace detail {

inline LatticeConfig random_window(rng::Stream& rs, const SuiteConfig& sc,
                                   double epsilon, std::uint64_t case_seed) {
  LatticeConfig c;
  const int min_slots = 4;
  const int slots = min_slots + static_cast<int>(rs.uniform() *
                        static_cast<double>(sc.max_row_slots - min_slots + 1));
  int height = 3 + static_cast<int>(rs.uniform() *
                        static_cast<double>(sc.max_height - 3 + 1));
  // keep the bottom-center safe cone non-empty
  if (height > slots - 1) height = slots - 1;
  c.x_lo = -(slots - 1);
  c.x_hi = slots - 1;
  c.t_lo = 0;
  c.t_hi = height;
  // epsilon 0 is the coalescing degenerate case; fields then carry no
  // Both sites, realized by a vanishing threshold
  c.epsilon = epsilon == 0.0 ? 1e-300 : epsilon;
  c.seed = case_seed;
  return c;
}

inline bool field_fails(const LatticeConfig& c, std::string* what) {
  const ArrowField f = ArrowField::sample(c);
  const CheckResult r = check_field(f);
  if (!r.ok && what) *what = r.failure;
  return !r.ok;
}

}  // namespace detail

inline SuiteResult run_suite(const SuiteConfig& sc, std::ostream* log = nullptr) {
  SuiteResult out;
  rng::Stream rs(rng::stream_seed(sc.seed, 0xbe7ULL));
  for (int i = 0; i < sc.cases; ++i) {
    const double eps = sc.epsilons[static_cast<std::size_t>(i) % sc.epsilons.size()];
    const std::uint64_t case_seed = rng::stream_seed(sc.seed, static_cast<std::uint64_t>(i) + 1);
    LatticeConfig c = detail::random_window(rs, sc, eps, case_seed);
    std::string what;
    ++out.cases_run;
    if (!detail::field_fails(c, &what)) continue;
    // shrink: try narrower and shorter windows that still fail
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      LatticeConfig cand = c;
      if (cand.x_hi - cand.x_lo >= 8) {
        cand.x_lo += 1;
        cand.x_hi -= 1;
        if (detail::field_fails(cand, &what)) {
          c = cand;
          shrunk = true;
          continue;
        }
      }
      cand = c;
      if (cand.t_hi - cand.t_lo > 3) {
        cand.t_hi -= 1;
        if (detail::field_fails(cand, &what)) {
          c = cand;
          shrunk = true;
        }
      }
    }
    out.ok = false;
    out.failure = what;
    out.minimal = c;
    out.minimal_epsilon = eps;
    if (log) {
      *log << "FAIL case " << i << " (" << what << ") minimal window x=["
           << c.x_lo << "," << c.x_hi << "] t=[" << c.t_lo << "," << c.t_hi
           << "] epsilon=" << eps << " seed=" << c.seed << "\n";
    }
    return out;
  }
  if (log) *log << "OK " << out.cases_run << " cases\n";
  return out;
}

}  // namespace bnet::invariants
