#include <doctest.h>

#include <map>
#include <set>

#include "bnet/classify.hpp"
#include "bnet/invariants.hpp"
#include "bnet/lattice.hpp"

using namespace bnet;
using classify::Box;
using classify::SiteKind;
using lattice::ArrowField;
using lattice::LatticeConfig;
using lattice::Mask;
using paths::Site;

namespace {

// coalescence fixture: two walkers diverge at t=0 and merge at t=3
ArrowField diverge_merge_fixture() {
  LatticeConfig c{0.5, -6, 6, 0, 4, 0};
  std::map<std::pair<long long, long long>, Mask> m;
  // walker A from (-2,0) goes right after an initial left step; walker B
  // from (2,0) mirrors it; all other sites LeftOnly
  m[{-2, 0}] = Mask::LeftOnly;
  m[{2, 0}] = Mask::RightOnly;
  m[{-3, 1}] = Mask::RightOnly;
  m[{3, 1}] = Mask::LeftOnly;
  m[{-2, 2}] = Mask::RightOnly;
  m[{2, 2}] = Mask::LeftOnly;
  m[{-1, 3}] = Mask::RightOnly;
  m[{1, 3}] = Mask::LeftOnly;
  return ArrowField::from_masks(c, m, Mask::LeftOnly);
}

}  // namespace

TEST_CASE("census: no separation sites in the coalescing limit") {
  LatticeConfig c{1e-300, -14, 14, 0, 6, 4};
  const auto f = ArrowField::sample(c);
  for (const auto& sc : classify::census(f, Box{-14, 14, 0, 6}))
    CHECK(sc.kind != SiteKind::Separation);
}

TEST_CASE("census: crossing set equals separation set") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    LatticeConfig c{0.4, -16, 16, 0, 6, seed};
    const auto f = ArrowField::sample(c);
    for (long long t = 0; t < 6; ++t)
      for (long long x = -15; x <= 15; ++x) {
        if (!lattice::is_forward_site(x, t)) continue;
        CHECK(classify::crossing_at(f, x, t) == (f.mask(x, t) == Mask::Both));
      }
  }
}

TEST_CASE("census on the hand fixture") {
  // 7x7-scale window with one branch and one known meeting point
  LatticeConfig c{0.5, -8, 8, 0, 4, 0};
  std::map<std::pair<long long, long long>, Mask> m;
  m[{0, 0}] = Mask::Both;        // separation site
  m[{-2, 0}] = Mask::RightOnly;  // keeps (-1,1) occupied
  m[{-1, 1}] = Mask::RightOnly;  // sends a walker into (0,2)
  const auto f = ArrowField::from_masks(c, m, Mask::LeftOnly);
  const auto census = classify::census(f, Box{-8, 8, 0, 4});
  std::map<std::pair<long long, long long>, classify::SiteCensus> by_site;
  for (const auto& sc : census) by_site[{sc.x, sc.t}] = sc;
  // the branch site is tagged separation with out-degree 2
  REQUIRE(by_site.count({0, 0}));
  CHECK(by_site[{0, 0}].kind == SiteKind::Separation);
  CHECK(by_site[{0, 0}].m_out == 2);
  // (0,2) receives the walker from (-1,1) going right and the branch's
  // left child from (1,1) going left: a meeting site
  REQUIRE(by_site.count({0, 2}));
  CHECK(by_site[{0, 2}].m_in == 2);
  CHECK(by_site[{0, 2}].kind == SiteKind::Meeting);
  // a plain site
  REQUIRE(by_site.count({-2, 2}));
  CHECK(by_site[{-2, 2}].kind == SiteKind::Plain);
}

TEST_CASE("reachable set: one step and full slice") {
  LatticeConfig c{1.0, -6, 6, 0, 3, 8};
  const auto f = ArrowField::sample(c);  // all Both: every arrow exists
  const classify::ReachableSet occ(f, 0);
  // after one step every interior position of the right parity is hit
  for (long long x = -5; x <= 5; ++x)
    if (lattice::is_forward_site(x, 1)) CHECK(occ.occupied(x, 1));
}

TEST_CASE("reachable set: non-increasing population under pure coalescence") {
  LatticeConfig c{1e-300, -20, 20, 0, 10, 17};
  const auto f = ArrowField::sample(c);
  const classify::ReachableSet occ(f, 0);
  // count inside the shrinking untainted core
  std::size_t prev = 1000;
  for (long long t = 0; t <= 10; ++t) {
    std::size_t n = 0;
    for (long long x = -20 + t; x <= 20 - t; ++x)
      if (lattice::is_forward_site(x, t) && occ.occupied(x, t)) ++n;
    if (t > 0) CHECK(n <= prev);
    prev = n;
  }
}

TEST_CASE("reachable set equals enumeration on a small window") {
  LatticeConfig c{0.5, -7, 7, 0, 5, 23};
  const auto f = ArrowField::sample(c);
  const classify::ReachableSet occ(f, 0);
  std::set<std::pair<long long, long long>> covered;
  for (long long x = -7; x <= 7; ++x) {
    if (!lattice::is_forward_site(x, 0)) continue;
    for (const auto& p : invariants::enumerate_paths(f, {x, 0}))
      for (long long t = 0; t <= p.end_time(); ++t)
        covered.insert({p.at(t), t});
  }
  // compare inside the safe cone
  for (long long t = 0; t <= 5; ++t)
    for (long long x = -7 + t; x <= 7 - t; ++x) {
      if (!lattice::is_forward_site(x, t)) continue;
      CHECK(occ.occupied(x, t) == (covered.count({x, t}) > 0));
    }
}

TEST_CASE("relevant separation points") {
  // coalescing limit: no branch sites at all
  LatticeConfig c0{1e-300, -10, 10, 0, 6, 3};
  CHECK(classify::relevant_separation_points(ArrowField::sample(c0), 0, 6).empty());

  // one-step horizon: every reachable branch site with t in (s,u)
  // qualifies vacuously when u - t == 1
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LatticeConfig c{0.5, -10, 10, 0, 4, seed};
    const auto f = ArrowField::sample(c);
    const classify::ReachableSet occ(f, 0);
    const auto pts = classify::relevant_separation_points(f, 0, 2);
    std::set<std::pair<long long, long long>> got;
    for (const auto& z : pts) got.insert({z.x, z.t});
    for (long long x = -10; x <= 10; ++x) {
      if (!lattice::is_forward_site(x, 1)) continue;
      const bool expect =
          occ.occupied(x, 1) && f.mask(x, 1) == Mask::Both;
      CHECK(got.count({x, 1}) == (expect ? 1u : 0u));
    }
  }

  // hand fixture: a branch whose children merge quickly is irrelevant
  LatticeConfig c{0.5, -8, 8, 0, 5, 0};
  std::map<std::pair<long long, long long>, Mask> m;
  m[{0, 0}] = Mask::Both;       // children: -1 and 1 at t=1
  m[{-1, 1}] = Mask::RightOnly; // left child forced right: merges at (0,2)
  m[{1, 1}] = Mask::LeftOnly;
  m[{0, 2}] = Mask::Both;       // second branch: children stay apart
  m[{-1, 3}] = Mask::LeftOnly;
  m[{1, 3}] = Mask::RightOnly;
  m[{-2, 4}] = Mask::LeftOnly;
  m[{2, 4}] = Mask::RightOnly;
  const auto f = ArrowField::from_masks(c, m, Mask::LeftOnly);
  const auto pts = classify::relevant_separation_points(f, 0, 5);
  std::set<std::pair<long long, long long>> got;
  for (const auto& z : pts) got.insert({z.x, z.t});
  CHECK(got.count({0, 2}) == 1);
  CHECK(got.count({0, 0}) == 0);  // children meet at t=2 inside (0,5)
}

TEST_CASE("relevant density estimate plumbing") {
  classify::RelevantDensityConfig rc;
  rc.epsilon = 0.2;
  rc.seed = 5;
  // zero replicates: error-flagged empty report
  const auto empty = classify::relevant_density_estimate_reduce({}, rc);
  CHECK(empty.tainted);
  CHECK(empty.n == 0);
  // s == u: zero by construction
  classify::RelevantDensityConfig degenerate = rc;
  degenerate.u = degenerate.s;
  const auto rep = classify::relevant_density_estimate_reduce({0.0, 0.0}, degenerate);
  CHECK(rep.estimate == 0.0);
  REQUIRE(rep.reference.has_value());
  CHECK(*rep.reference == 0.0);
}

TEST_CASE("wedge predicate") {
  // hand wedge: dual walls meeting at the bottom point (0,1)
  paths::DualLatticePath rh, lh;
  rh.start_time = 4;
  rh.positions = {-3, -2, -1, 0, 1};  // at t: 4,3,2,1,0
  lh.start_time = 4;
  lh.positions = {3, 2, 1, 0, 1};
  const auto w = classify::Wedge::make(rh, lh);
  REQUIRE(w.bottom_time.has_value());
  CHECK(*w.bottom_time == 1);
  // a path far outside never enters
  paths::LatticePath outside;
  outside.start_time = 0;
  outside.positions = {-6, -5, -6, -5, -6};
  CHECK_FALSE(classify::wedge_entered_from_outside(outside, w));
  // a path through the bottom contact only: starts on the closure at
  // the bottom time and slips inside, which is allowed
  paths::LatticePath through_bottom;
  through_bottom.start_time = 1;
  through_bottom.positions = {1, 0, 1};  // contact at t=1, interior afterwards
  CHECK(w.interior(0, 2));
  CHECK_FALSE(classify::wedge_entered_from_outside(through_bottom, w));
  // a crossing path: strictly outside the closure before the bottom
  // time, strictly inside later
  paths::LatticePath crossing;
  crossing.start_time = 0;
  crossing.positions = {-4, -3, -2, -1, 0};
  CHECK(w.interior(-1, 3));
  CHECK(classify::wedge_entered_from_outside(crossing, w));
}

TEST_CASE("mesh predicate") {
  // hand mesh: boundaries from one point, right-most on the left
  paths::LatticePath r, l;
  r.start_time = 0;
  r.positions = {0, -1, -2, -1, 0};
  l.start_time = 0;
  l.positions = {0, 1, 2, 1, 0};
  classify::Mesh mesh{r, l, 0, 4};
  CHECK_NOTHROW(mesh.validate());
  paths::LatticePath outside;
  outside.start_time = 0;
  outside.positions = {4, 5, 4, 5, 4};
  CHECK_FALSE(classify::mesh_entered(outside, mesh));
  paths::LatticePath inside;
  inside.start_time = 0;
  inside.positions = {2, 1, 0, 1, 0};  // interior at t=2 (x=0)
  CHECK(mesh.interior(0, 2));
  CHECK(classify::mesh_entered(inside, mesh));
  // meshes use plain "enters": even a path through the bottom point
  // counts once it reaches the open region
  paths::LatticePath through;
  through.start_time = 0;
  through.positions = {0, 1, 0, 1, 0};
  CHECK(classify::mesh_entered(through, mesh));
}

TEST_CASE("t-mesh components on the diverge-merge fixture") {
  const auto f = diverge_merge_fixture();
  const auto comps = classify::t_mesh_components(f, 0);
  // two coalescence events seal two voids: the one-cell gap where the
  // middle walker leaves walker A, and the big void between A and B
  int closed = 0;
  for (const auto& comp : comps) {
    if (comp.touches_top || comp.touches_side) continue;
    ++closed;
    REQUIRE(comp.boundaries_extracted);
    CHECK(paths::is_net_path(f, comp.left_boundary));
    CHECK(paths::is_net_path(f, comp.right_boundary));
    // left boundary follows the right-most path from its bottom site
    const auto rm = paths::rightmost_path(
        f, {comp.left_boundary.positions.front(), comp.left_boundary.start_time});
    for (long long t = comp.left_boundary.start_time;
         t <= comp.left_boundary.end_time(); ++t)
      CHECK(rm.at(t) == comp.left_boundary.at(t));
  }
  CHECK(closed == 2);
}

TEST_CASE("t-mesh: full slice at the start time is covered") {
  LatticeConfig c{0.5, -10, 10, 0, 5, 99};
  const auto f = ArrowField::sample(c);
  const classify::ReachableSet occ(f, 0);
  for (long long x = -10; x <= 10; ++x)
    if (lattice::is_forward_site(x, 0)) CHECK(occ.occupied(x, 0));
}

TEST_CASE("incoming signature") {
  const auto f = diverge_merge_fixture();
  // the merge site of the two walkers is C_m
  // A: -2 -> -3 -> -2 -> -1 -> 0 ; B: 2 -> 3 -> 2 -> 1 -> 0
  CHECK(classify::incoming_signature(f, {0, 4}, 4) == classify::IncomingType::Cm);
  LatticeConfig c{0.5, -8, 8, 0, 4, 0};
  std::map<std::pair<long long, long long>, Mask> m;
  m[{1, 1}] = Mask::RightOnly;   // with LeftOnly at (-1,1), nothing points to (0,2)
  m[{-2, 2}] = Mask::Both;       // occupied branch site
  const auto g = ArrowField::from_masks(c, m, Mask::LeftOnly);
  CHECK(classify::incoming_signature(g, {0, 2}, 2) == classify::IncomingType::Co);
  CHECK(classify::incoming_signature(g, {-2, 2}, 2) == classify::IncomingType::Cs);
  // plain occupied site with one incoming arrow
  CHECK(classify::incoming_signature(g, {-4, 2}, 2) == classify::IncomingType::Cp);
}
