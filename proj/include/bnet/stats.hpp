#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bnet/report.hpp"

// Analytic references: the point-set density Psi, the standard normal
// CDF, and the quadrature for the density of relevant separation points.

namespace bnet::stats {

// Standard normal CDF via erfc; absolute error well below 1e-7 over
// |x| <= 8 in double precision.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Psi(t) = e^{-t}/sqrt(pi t) + 2 Phi(sqrt(2t)), the density of the
// point set of net paths started from the full line t time units ago.
// Accepts t = +infinity, where the value is 2.
inline double psi(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("psi: t must be > 0");
  if (std::isinf(t)) return 2.0;
  return std::exp(-t) / std::sqrt(M_PI * t) + 2.0 * normal_cdf(std::sqrt(2.0 * t));
}

namespace detail {

// Adaptive Simpson on a smooth integrand.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

// 2 (b-a) * Integral_s^u Psi(t-S) Psi(U-t) dt. The 1/sqrt endpoint
// singularities at t=S and t=U are removed by the substitutions
// t-S = v^2 and U-t = w^2; relative error <= 1e-6.
inline double relevant_density_integral(double S, double s, double u, double U,
                                        double a, double b) {
  if (!(S <= s && s <= u && u <= U))
    throw std::invalid_argument("relevant_density_integral: need S<=s<=u<=U");
  if (!(a <= b))
    throw std::invalid_argument("relevant_density_integral: need a<=b");
  if (s == u || a == b) return 0.0;

  const double mid = 0.5 * (s + u);
  // left half: t = S + v^2, dt = 2v dv; Psi(t-S)*2v = 2 e^{-v^2}/sqrt(pi)
  //            + 4 v Phi(sqrt(2) v), smooth at v=0.
  const auto left = [&](double v) {
    const double t = S + v * v;
    const double first = 2.0 * std::exp(-v * v) / std::sqrt(M_PI) +
                         4.0 * v * normal_cdf(std::sqrt(2.0) * v);
    return first * psi(U - t);
  };
  // right half: t = U - w^2 mirrored.
  const auto right = [&](double w) {
    const double t = U - w * w;
    const double second = 2.0 * std::exp(-w * w) / std::sqrt(M_PI) +
                          4.0 * w * normal_cdf(std::sqrt(2.0) * w);
    return psi(t - S) * second;
  };

  const double tol = 1e-9;
  const double lo_v = std::sqrt(s - S), hi_v = std::sqrt(mid - S);
  const double lo_w = std::sqrt(U - u), hi_w = std::sqrt(U - mid);
  const double integral =
      detail::integrate(left, lo_v, hi_v, tol) +
      detail::integrate(right, lo_w, hi_w, tol);
  return 2.0 * (b - a) * integral;
}

}  // namespace bnet::stats
