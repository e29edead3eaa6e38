#include <doctest.h>

#include <cmath>

#include "bnet/rng.hpp"
#include "bnet/stats.hpp"

using namespace bnet;

namespace {

// Independent quadrature oracle: composite midpoint rule directly on the
// unsubstituted integrand (midpoints avoid the endpoint singularities).
double midpoint_oracle(double S, double s, double u, double U, double a,
                       double b, std::size_t panels) {
  if (s == u || a == b) return 0.0;
  const double h = (u - s) / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double t = s + (static_cast<double>(i) + 0.5) * h;
    acc += stats::psi(t - S) * stats::psi(U - t);
  }
  return 2.0 * (b - a) * acc * h;
}

}  // namespace

TEST_CASE("normal cdf basics") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stats::normal_cdf(1.414214) == doctest::Approx(0.921350).epsilon(1e-6));
  // symmetry over a grid
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CHECK(stats::normal_cdf(-x) + stats::normal_cdf(x) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("psi values and asymptotics") {
  CHECK(stats::psi(1.0) == doctest::Approx(2.050254).epsilon(1e-6));
  CHECK(stats::psi(std::numeric_limits<double>::infinity()) == 2.0);
  // t -> infinity: approaches 2 from above, within 1e-6 for t >= 10
  double prev = stats::psi(10.0);
  CHECK(prev == doctest::Approx(2.0).epsilon(1e-6));
  for (double t = 11.0; t <= 30.0; t += 1.0) {
    const double v = stats::psi(t);
    CHECK(v >= 2.0);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  // t -> 0+: t * psi(t)^2 -> 1/pi
  const double t0 = 1e-10;
  const double v = stats::psi(t0);
  CHECK(t0 * v * v == doctest::Approx(1.0 / M_PI).epsilon(1e-4));
  // psi > 2 on a grid in (0, 100]
  for (double t = 0.05; t <= 100.0; t += 0.5) CHECK(stats::psi(t) > 2.0);
  CHECK_THROWS_AS(stats::psi(0.0), std::invalid_argument);
}

TEST_CASE("relevant density integral trivials") {
  CHECK(stats::relevant_density_integral(0, 0.3, 0.3, 1, 0, 1) == 0.0);
  CHECK(stats::relevant_density_integral(0, 0.1, 0.9, 1, 0.5, 0.5) == 0.0);
  CHECK_THROWS_AS(stats::relevant_density_integral(0, 0.9, 0.1, 1, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("relevant density integral against midpoint oracle") {
  // the full-interval value is pinned as a regression constant; the
  // midpoint oracle must agree to 1e-4 relative
  const double pinned = 11.130618;
  const double v = stats::relevant_density_integral(0, 0, 1, 1, 0, 1);
  CHECK(v == doctest::Approx(pinned).epsilon(2e-6));
  const double oracle = midpoint_oracle(0, 0, 1, 1, 0, 1, 1u << 20);
  CHECK(v == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("quadrature agrees with midpoint oracle on random tuples") {
  rng::Stream rs(12345);
  for (int k = 0; k < 20; ++k) {
    const double S = rs.uniform() * 2.0 - 1.0;
    const double span = 0.2 + rs.uniform() * 2.0;
    const double U = S + span;
    const double s = S + rs.uniform() * 0.4 * span;
    const double u = U - rs.uniform() * 0.4 * span;
    const double a = rs.uniform() * 2.0 - 1.0;
    const double b = a + rs.uniform() * 2.0;
    const double v = stats::relevant_density_integral(S, s, u, U, a, b);
    const double oracle = midpoint_oracle(S, s, u, U, a, b, 1u << 20);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("mc_mean") {
  CHECK(stats::mc_mean({3.5}).stderr_ == 0.0);
  CHECK(stats::mc_mean({3.5}).estimate == 3.5);
  const auto c = stats::mc_mean(std::vector<double>(100, 2.0));
  CHECK(c.estimate == 2.0);
  CHECK(c.stderr_ == 0.0);
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2) ? 1.0 : 0.0;
  const auto r = stats::mc_mean(alt);
  CHECK(r.estimate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.stderr_ == doctest::Approx(0.0158).epsilon(2e-3));
  const auto empty = stats::mc_mean({});
  CHECK(empty.tainted);
  CHECK(empty.n == 0);
}
