#include <doctest.h>

#include <cmath>
#include <map>

#include "bnet/invariants.hpp"
#include "bnet/lattice.hpp"
#include "bnet/paths.hpp"

using namespace bnet;
using lattice::ArrowField;
using lattice::LatticeConfig;
using lattice::Mask;
using paths::LatticePath;
using paths::Site;

namespace {

ArrowField single_branch_fixture() {
  // window x in [-3,3], t in [0,3]; Both at (0,0) only, LeftOnly elsewhere
  LatticeConfig c{0.5, -3, 3, 0, 3, 0};
  return ArrowField::from_masks(c, {{{0, 0}, Mask::Both}}, Mask::LeftOnly);
}

}  // namespace

TEST_CASE("extremal paths on the hand fixture") {
  const auto f = single_branch_fixture();
  const auto l = paths::leftmost_path(f, {0, 0});
  CHECK(l.positions == std::vector<long long>{0, -1, -2, -3});
  CHECK_FALSE(l.tainted);
  const auto r = paths::rightmost_path(f, {0, 0});
  // first step +1 through the branch, then forced left by LeftOnly sites
  CHECK(r.positions == std::vector<long long>{0, 1, 0, -1});
  for (long long t = 0; t <= 3; ++t) CHECK(l.at(t) <= r.at(t));
}

TEST_CASE("no branch sites on trajectory: leftmost equals rightmost") {
  LatticeConfig c{0.5, -6, 6, 0, 4, 0};
  const auto f = ArrowField::from_masks(c, {}, Mask::RightOnly);
  const auto l = paths::leftmost_path(f, {0, 0});
  const auto r = paths::rightmost_path(f, {0, 0});
  CHECK(l.positions == r.positions);
}

TEST_CASE("ordering over random fields") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    LatticeConfig c{0.35, -12, 12, 0, 6, seed};
    const auto f = ArrowField::sample(c);
    const auto l = paths::leftmost_path(f, {0, 0});
    const auto r = paths::rightmost_path(f, {0, 0});
    const long long hi = std::min(l.end_time(), r.end_time());
    for (long long t = 0; t <= hi; ++t) CHECK(l.at(t) <= r.at(t));
  }
}

TEST_CASE("parity errors") {
  const auto f = single_branch_fixture();
  CHECK_THROWS_AS(paths::leftmost_path(f, {1, 0}), lattice::ParityError);
  CHECK_THROWS_AS(paths::dual_leftmost(f, {0, 0}), lattice::ParityError);
}

TEST_CASE("dual extremal paths mirror the forward rules") {
  const auto f = single_branch_fixture();
  // dual site above the branch: (0,1); dual mask there is Both
  CHECK(f.dual_mask(0, 1) == Mask::Both);
  const auto dl = paths::dual_leftmost(f, {0, 1});
  const auto dr = paths::dual_rightmost(f, {0, 1});
  // dual left-most takes its right arrow at a branching site
  CHECK(dl.at(0) == 1);
  CHECK(dr.at(0) == -1);
  CHECK(dr.at(0) <= dl.at(0));
  // over a larger random field, dual right-most stays left of dual
  // left-most from the same start
  LatticeConfig c{0.4, -16, 16, 0, 8, 5};
  const auto g = ArrowField::sample(c);
  for (long long x = -4; x <= 4; ++x) {
    if (!lattice::is_dual_site(x, 8)) continue;
    const auto a = paths::dual_rightmost(g, {x, 8});
    const auto b = paths::dual_leftmost(g, {x, 8});
    const long long lo = std::max(a.end_time(), b.end_time());
    for (long long t = lo; t <= 8; ++t) CHECK(a.at(t) <= b.at(t));
  }
}

TEST_CASE("is_net_path basics and enumeration equality") {
  const auto f = single_branch_fixture();
  CHECK(paths::is_net_path(f, paths::leftmost_path(f, {0, 0})));
  // a right step at a LeftOnly site is rejected
  LatticePath bad;
  bad.start_time = 0;
  bad.positions = {-2, -1};
  CHECK_FALSE(paths::is_net_path(f, bad));

  // 7x7-scale window: acceptance equals exhaustive enumeration
  LatticeConfig c{0.5, -6, 6, 0, 5, 77};
  const auto g = ArrowField::sample(c);
  const auto all = invariants::enumerate_paths(g, {0, 0});
  CHECK(!all.empty());
  for (const auto& p : all) CHECK(paths::is_net_path(g, p));
  // and every accepted sequence is in the enumeration
  const auto set = invariants::as_position_set(all);
  LatticePath probe;
  probe.start_time = 0;
  probe.positions = paths::rightmost_path(g, {0, 0}).positions;
  CHECK(set.count(probe.positions));
}

TEST_CASE("hop concatenate") {
  const auto f = single_branch_fixture();
  const auto l = paths::leftmost_path(f, {0, 0});
  const auto r = paths::rightmost_path(f, {0, 0});
  // identity hop
  const auto same = paths::hop_concatenate(l, l, 2);
  CHECK(same.positions == l.positions);
  // hopping at the start time is not a true intersection
  CHECK_THROWS_AS(paths::hop_concatenate(l, r, 0), std::invalid_argument);
  // positions disagreeing at the hop time
  CHECK_THROWS_AS(paths::hop_concatenate(l, r, 1), std::invalid_argument);
  // a valid hop between paths through a branch point stays a net path
  LatticeConfig c{1.0, -8, 8, 0, 4, 3};
  const auto g = ArrowField::sample(c);  // every site branches
  const auto a = paths::leftmost_path(g, {0, 0});
  const auto b = paths::rightmost_path(g, {-2, 0});
  // a(1) = -1 = b(1)
  CHECK(a.at(1) == b.at(1));
  const auto hopped = paths::hop_concatenate(a, b, 1);
  CHECK(paths::is_net_path(g, hopped));
}

TEST_CASE("first meeting time") {
  const auto f = single_branch_fixture();
  const auto l = paths::leftmost_path(f, {0, 0});
  CHECK(paths::first_meeting_time(l, l).value() == 1);
  // coalescing fixture: walkers from (-2,0) and (0,0) under LeftOnly
  const auto a = paths::leftmost_path(f, {-2, 0});
  CHECK_FALSE(paths::first_meeting_time(a, l).has_value());
  LatticeConfig c{0.5, -6, 6, 0, 3, 0};
  const auto g = ArrowField::from_masks(
      c, {{{-2, 0}, Mask::RightOnly}, {{-1, 1}, Mask::RightOnly}},
      Mask::LeftOnly);
  const auto p1 = paths::leftmost_path(g, {-2, 0});  // -2,-1,0,-1
  const auto p2 = paths::leftmost_path(g, {2, 0});   // 2,1,0,-1
  CHECK(paths::first_meeting_time(p1, p2).value() == 2);
  // parity error
  LatticePath odd;
  odd.start_time = 1;
  odd.positions = {0, 1, 0};
  CHECK_THROWS_AS(paths::first_meeting_time(p1, odd), lattice::ParityError);
}

TEST_CASE("reflected rightmost: inactive constraint") {
  LatticeConfig c{0.4, -10, 10, 0, 6, 11};
  const auto f = ArrowField::sample(c);
  // dual path pinned far right of everything the walker can reach
  paths::DualLatticePath far;
  far.start_time = 6;
  far.positions = {9, 8, 9, 8, 9, 8, 9};
  const auto refl = paths::reflected_rightmost(f, {0, 0}, far);
  CHECK(refl.path.positions == paths::rightmost_path(f, {0, 0}).positions);
  CHECK(refl.reflection_times.empty());
}

TEST_CASE("reflected rightmost: start on wrong side") {
  const auto f = single_branch_fixture();
  paths::DualLatticePath hat;
  hat.start_time = 3;
  hat.positions = {-2, -3, -2, -3};  // t: 3,2,1,0
  CHECK_THROWS_AS(paths::reflected_rightmost(f, {0, 0}, hat),
                  std::domain_error);
}

TEST_CASE("reflected rightmost equals enumeration maximum on 9x9 windows") {
  int reflections_seen = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    LatticeConfig c{0.5, -8, 8, 0, 7, 900 + seed};
    const auto f = ArrowField::sample(c);
    const Site z{0, 0};
    const auto pihat = paths::dual_leftmost(f, {2, 7});
    if (!pihat.defined_at(0) || pihat.tainted) continue;
    if (z.x > pihat.at(0)) continue;
    const auto refl = paths::reflected_rightmost(f, z, pihat);
    const auto admissible = invariants::enumerate_admissible(f, z, pihat);
    REQUIRE(!admissible.empty());
    std::vector<long long> maxpos = admissible[0].positions;
    for (const auto& p : admissible)
      for (std::size_t i = 0; i < maxpos.size(); ++i)
        maxpos[i] = std::max(maxpos[i], p.positions[i]);
    CHECK(refl.path.positions == maxpos);
    reflections_seen += static_cast<int>(refl.reflection_times.size());
    // segment property: right-most restarted at each segment start
    std::vector<long long> cuts = refl.reflection_times;
    cuts.push_back(refl.path.end_time());
    long long seg_start = z.t;
    for (const long long cut : cuts) {
      const auto rm =
          paths::rightmost_path(f, {refl.path.at(seg_start), seg_start});
      for (long long t = seg_start; t <= cut; ++t) CHECK(rm.at(t) == refl.path.at(t));
      if (cut < refl.path.end_time()) seg_start = cut + 1;
    }
  }
  CHECK(reflections_seen > 0);
}

TEST_CASE("rescale") {
  LatticePath p;
  p.start_time = 100;
  p.positions = {10, 11, 10};
  const auto pts = paths::rescale(p, 0.1);
  CHECK(pts[0].x == doctest::Approx(1.0));
  CHECK(pts[0].t == doctest::Approx(1.0));
  // identity at eps = 1
  const auto idpts = paths::rescale(p, 1.0);
  CHECK(idpts[1].x == 11.0);
  CHECK(idpts[1].t == 101.0);
  // composition S_eps . S_delta = S_{eps delta} on coordinates
  const double eps = 0.5, delta = 0.2;
  const auto once = paths::rescale(p, eps * delta);
  CHECK(once[2].x == doctest::Approx(10 * eps * delta));
  CHECK(once[2].t == doctest::Approx(102.0 * eps * eps * delta * delta));
}

TEST_CASE("path distance") {
  paths::ScaledPath a, b;
  a.start_time = 0.0;
  a.knot_dt = 1.0;
  a.positions = {0.0, 0.0, 0.0};
  b = a;
  CHECK(paths::path_distance(a, a) == 0.0);
  // constant paths at 0 and 1, both starting at 0: sup at t = 0
  b.positions = {1.0, 1.0, 1.0};
  CHECK(paths::path_distance(a, b) ==
        doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
  // bounded by 2 for wildly different paths
  paths::ScaledPath c;
  c.start_time = -50.0;
  c.knot_dt = 1.0;
  c.positions.assign(200, -1000.0);
  paths::ScaledPath d;
  d.start_time = 30.0;
  d.knot_dt = 1.0;
  d.positions.assign(10, 1000.0);
  CHECK(paths::path_distance(c, d) <= 2.0);
}

TEST_CASE("hausdorff distance") {
  paths::ScaledPath a, b, c;
  a.start_time = 0;
  a.knot_dt = 1.0;
  a.positions = {0, 0, 0};
  b = a;
  b.positions = {1, 1, 1};
  c = a;
  c.positions = {2, 2, 2};
  CHECK(paths::hausdorff_distance({a, b}, {a, b}) == 0.0);
  CHECK(paths::hausdorff_distance({a}, {b}) ==
        doctest::Approx(paths::path_distance(a, b)));
  // three-path fixture: {a} vs {b, c}: nearest to a is b; and the
  // reverse direction is dominated by c's distance to a
  const double dab = paths::path_distance(a, b);
  const double dac = paths::path_distance(a, c);
  CHECK(paths::hausdorff_distance({a}, {b, c}) == doctest::Approx(dac));
  CHECK(paths::hausdorff_distance({a, b}, {a, b, c}) ==
        doctest::Approx(paths::path_distance(b, c)));
  CHECK(dab < dac);
}
