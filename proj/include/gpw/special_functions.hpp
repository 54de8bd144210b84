// Airy Ai and Bessel J0/J1: point values and Taylor sequences about a center.
//
// Point values come from the Maclaurin expansions summed in quad precision
// (__float128), which absorbs the cancellation of the alternating/competing
// terms over the validated ranges below.  Taylor sequences are then generated
// from the defining ODEs.

#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "gpw/series.hpp"

namespace gpw::special {

inline constexpr double kAiryRange = 10.0;
inline constexpr double kBesselRange = 30.0;

namespace detail {

using quad = __float128;

inline quad qabs(quad v) { return v < 0 ? -v : v; }

// Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3), each split
// into a leading double and its correction.
inline quad airy_c1() { return quad(0.3550280538878172) + quad(2.05233632436212e-17); }
inline quad airy_c2() { return quad(0.2588194037928068) - quad(2.522243111610832e-17); }

struct QuadPair {
  quad value;
  quad derivative;
};

// Ai(x) = c1 f(x) - c2 g(x) with f, g the even-in-x^3 solutions of w'' = x w.
inline QuadPair airy_maclaurin(double xd) {
  const quad x = xd;
  const quad x3 = x * x * x;
  quad f = 0, fp = 0, g = 0, gp = 0;
  quad tf = 1;  // x^(3k) coefficient term of f
  quad tg = x;  // x^(3k+1) term of g
  for (int k = 0; k < 400; ++k) {
    const int nf = 3 * k;
    const int ng = 3 * k + 1;
    f += tf;
    g += tg;
    if (x != 0) {
      if (nf > 0) fp += tf * quad(nf) / x;
      gp += tg * quad(ng) / x;
    } else if (k == 0) {
      gp += 1;
    }
    tf *= x3 / (quad(nf + 2) * quad(nf + 3));
    tg *= x3 / (quad(ng + 2) * quad(ng + 3));
    if (k > 4 && qabs(tf) + qabs(tg) < quad(1e-36) * (qabs(f) + qabs(g) + 1)) break;
  }
  return {airy_c1() * f - airy_c2() * g, airy_c1() * fp - airy_c2() * gp};
}

// J_nu(x) = sum_m (-1)^m (x/2)^(2m+nu) / (m! (m+nu)!)
inline QuadPair bessel_maclaurin(int nu, double xd) {
  const quad x = xd;
  const quad h = x / 2;
  quad term = 1;
  for (int k = 0; k < nu; ++k) term *= h;  // (x/2)^nu / nu!  (nu <= 1)
  quad value = 0, deriv = 0;
  for (int m = 0; m < 400; ++m) {
    const int power = 2 * m + nu;
    value += term;
    // d/dx (x/2)^p = p/2 (x/2)^(p-1)
    if (power > 0) {
      if (x != 0)
        deriv += term * quad(power) / x;
      else if (power == 1)
        deriv += quad(0.5);
    }
    term *= -(h * h) / (quad(m + 1) * quad(m + 1 + nu));
    if (m > 4 && qabs(term) < quad(1e-36) * (qabs(value) + 1)) break;
  }
  return {value, deriv};
}

inline void require_airy_range(double x) {
  if (!(std::abs(x) <= kAiryRange)) throw Error("Airy argument outside validated range");
}

inline void require_bessel(int nu, double x) {
  if (nu != 0 && nu != 1) throw Error("Bessel order must be 0 or 1");
  if (!(std::abs(x) <= kBesselRange)) throw Error("Bessel argument outside validated range");
}

}  // namespace detail

inline double airy_ai(double x) {
  detail::require_airy_range(x);
  return static_cast<double>(detail::airy_maclaurin(x).value);
}

inline double airy_ai_prime(double x) {
  detail::require_airy_range(x);
  return static_cast<double>(detail::airy_maclaurin(x).derivative);
}

inline double bessel_j(int nu, double x) {
  detail::require_bessel(nu, x);
  return static_cast<double>(detail::bessel_maclaurin(nu, x).value);
}

inline double bessel_j_prime(int nu, double x) {
  detail::require_bessel(nu, x);
  return static_cast<double>(detail::bessel_maclaurin(nu, x).derivative);
}

enum class SpecialFunction { airy_ai, bessel_j0, bessel_j1 };

struct SpecialFunctionSeed {
  SpecialFunction name;
  double (*value_at)(double);
  double (*derivative_at)(double);
};

inline SpecialFunctionSeed seed(SpecialFunction name) {
  switch (name) {
    case SpecialFunction::airy_ai:
      return {name, &airy_ai, &airy_ai_prime};
    case SpecialFunction::bessel_j0:
      return {name, [](double x) { return bessel_j(0, x); }, [](double x) { return bessel_j_prime(0, x); }};
    case SpecialFunction::bessel_j1:
      return {name, [](double x) { return bessel_j(1, x); }, [](double x) { return bessel_j_prime(1, x); }};
  }
  throw Error("unknown special function");
}

/// Taylor sequence of Ai about `center`: a_{m+2} = (center a_m + a_{m-1}) / ((m+2)(m+1)).
inline UniSeries airy_taylor(double center, int degree) {
  if (!(std::abs(center) <= kAiryRange)) throw Error("outside validated range");
  if (degree < 1) throw Error("Airy series needs degree >= 1");
  const auto seeds = detail::airy_maclaurin(center);
  std::vector<cplx> a(static_cast<std::size_t>(degree) + 1);
  a[0] = static_cast<double>(seeds.value);
  a[1] = static_cast<double>(seeds.derivative);
  for (int m = 0; m + 2 <= degree; ++m) {
    const cplx prev = m >= 1 ? a[m - 1] : cplx{};
    a[m + 2] = (center * a[m] + prev) / static_cast<double>((m + 2) * (m + 1));
  }
  return {center, std::move(a)};
}

/// Ai seeds pass when a series generated at 0 and evaluated at `delta` agrees
/// with the directly summed value there.
inline bool airy_seed_self_check(double delta = 0.05) {
  const UniSeries s = airy_taylor(0.0, 30);
  return std::abs(s.evaluate(delta).real() - airy_ai(delta)) <= 1e-14;
}

/// Taylor sequence of J_nu (nu in {0,1}) about `center`.  Away from the origin
/// the shifted Bessel ODE gives
///   c^2 (m+2)(m+1) a_{m+2} = -[c (m+1)(2m+1) a_{m+1} + (m^2 + c^2 - nu^2) a_m + 2c a_{m-1} + a_{m-2}];
/// near the origin (where that recurrence divides by a small c^2) the
/// Maclaurin series is re-expanded about the center instead.
inline UniSeries bessel_taylor(int order, double center, int degree) {
  detail::require_bessel(order, center);
  if (degree < 1) throw Error("Bessel series needs degree >= 1");
  using detail::quad;
  std::vector<quad> a(static_cast<std::size_t>(degree) + 1, quad(0));
  if (std::abs(center) < 0.5) {
    // a_m = sum_{p>=m} beta_p binom(p, m) c^(p-m), beta_p the Maclaurin coefficients
    const int terms = degree + 60;
    std::vector<quad> beta(static_cast<std::size_t>(terms) + 1, quad(0));
    quad t = 1;
    for (int k = 0; k < order; ++k) t /= 2;
    for (int m = 0; 2 * m + order <= terms; ++m) {
      beta[2 * m + order] = t;
      t *= quad(-0.25) / (quad(m + 1) * quad(m + 1 + order));
    }
    const quad c = center;
    for (int m = 0; m <= degree; ++m) {
      quad sum = 0, binom = 1, cpow = 1;
      for (int p = m; p <= terms; ++p) {
        sum += beta[p] * binom * cpow;
        binom = binom * quad(p + 1) / quad(p + 1 - m);
        cpow *= c;
      }
      a[m] = sum;
    }
  } else {
    const auto seeds = detail::bessel_maclaurin(order, center);
    a[0] = seeds.value;
    a[1] = seeds.derivative;
    const quad c = center;
    const quad nu2 = order * order;
    for (int m = 0; m + 2 <= degree; ++m) {
      quad rhs = c * quad((m + 1) * (2 * m + 1)) * a[m + 1] + (quad(m * m) + c * c - nu2) * a[m];
      if (m >= 1) rhs += 2 * c * a[m - 1];
      if (m >= 2) rhs += a[m - 2];
      a[m + 2] = -rhs / (c * c * quad((m + 2) * (m + 1)));
    }
  }
  UniSeries out{center, std::vector<cplx>(a.size())};
  for (std::size_t k = 0; k < a.size(); ++k) out.coeffs[k] = static_cast<double>(a[k]);
  return out;
}

}  // namespace gpw::special
