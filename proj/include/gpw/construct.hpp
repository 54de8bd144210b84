// Amplitude-based GPWs  G = Q exp(d . (r - rc))  and, for comparison,
// phase-based GPWs  G = exp(P), built layer by layer so that the Taylor
// expansion of L G vanishes through order q-1 at the center.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gpw/operator_model.hpp"

namespace gpw {

struct Direction {
  cplx lambda10;
  cplx lambda01;

  CplxPair pair() const { return {lambda10, lambda01}; }
};

enum class Normalization { general, classical_pw };

inline const char* to_string(Normalization n) { return n == Normalization::general ? "general" : "classical-pw"; }

inline Normalization normalization_from_string(const std::string& s) {
  if (s == "general") return Normalization::general;
  if (s == "classical-pw" || s == "classical_pw") return Normalization::classical_pw;
  throw Error("unknown normalization '" + s + "' (expected general or classical-pw)");
}

struct AmplitudeGPW {
  Point center;
  Direction direction;
  int q = 1;
  TaylorPoly2 Q;

  cplx evaluate(Point p) const {
    const cplx e = std::exp(direction.lambda10 * (p.x - center.x) + direction.lambda01 * (p.y - center.y));
    return Q.evaluate(p) * e;
  }
  CplxPair gradient(Point p) const {
    const cplx e = std::exp(direction.lambda10 * (p.x - center.x) + direction.lambda01 * (p.y - center.y));
    const cplx q = Q.evaluate(p);
    const CplxPair g = Q.gradient(p);
    return {(g.x + q * direction.lambda10) * e, (g.y + q * direction.lambda01) * e};
  }
};

struct PhaseGPW {
  Point center;
  int q = 1;
  TaylorPoly2 P;

  Direction direction() const { return {P(1, 0), P(0, 1)}; }
  cplx evaluate(Point p) const { return std::exp(P.evaluate(p)); }
  CplxPair gradient(Point p) const {
    const cplx e = std::exp(P.evaluate(p));
    const CplxPair g = P.gradient(p);
    return {g.x * e, g.y * e};
  }
};

/// Counts coefficient updates performed by the layer sweep.
struct SweepStats {
  std::size_t updates = 0;
};

inline constexpr double kPivotTolerance = 1e-12;
inline constexpr double kEigenTolerance = 1e-12;
inline constexpr double kScaleTolerance = 1e-10;

/// Orthogonal P and eigenvalues with P A P^T = diag(gamma1, gamma2), P = I
/// for diagonal A.
struct SymmetricEigen2 {
  double gamma1, gamma2;
  double P[2][2];
};

inline SymmetricEigen2 symmetric_eigen2(const std::array<std::array<double, 2>, 2>& a) {
  const double a11 = a[0][0], a12 = a[0][1], a22 = a[1][1];
  double phi = 0.0;
  if (a12 != 0.0) phi = a11 != a22 ? 0.5 * std::atan(2.0 * a12 / (a11 - a22)) : std::numbers::pi / 4;
  const double c = std::cos(phi), s = std::sin(phi);
  SymmetricEigen2 e;
  e.P[0][0] = c;
  e.P[0][1] = s;
  e.P[1][0] = -s;
  e.P[1][1] = c;
  e.gamma1 = c * c * a11 + 2 * c * s * a12 + s * s * a22;
  e.gamma2 = s * s * a11 - 2 * c * s * a12 + c * c * a22;
  return e;
}

/// Direction for angle theta at `center`.  General mode:
///   d = sqrt(-s) P^T diag(1/sqrt(gamma1), 1/sqrt(gamma2)) (cos theta, sin theta),
/// so that d^T A d + s = 0 at the center; classical mode: d = sqrt(-s)(cos, sin).
inline Direction normalize_direction(const OperatorSpec& op, Point center, double theta,
                                     Normalization mode = Normalization::general) {
  const cplx s = op.s.value_at(center);
  if (std::abs(s) < kScaleTolerance) throw Error("vanishing zeroth-order coefficient: supply explicit scale");
  // +0.0 keeps a real positive -s on the principal branch (avoids -0 imaginary parts)
  const cplx scale = std::sqrt(cplx(-s.real(), -s.imag() + 0.0));
  const double ct = std::cos(theta), st = std::sin(theta);
  if (mode == Normalization::classical_pw) return {scale * ct, scale * st};
  const auto eig = symmetric_eigen2(op.principal_at(center));
  if (std::abs(eig.gamma1) < kEigenTolerance || std::abs(eig.gamma2) < kEigenTolerance)
    throw Error("degenerate principal part");
  const cplx w1 = ct / std::sqrt(cplx(eig.gamma1));
  const cplx w2 = st / std::sqrt(cplx(eig.gamma2));
  return {scale * (eig.P[0][0] * w1 + eig.P[1][0] * w2), scale * (eig.P[0][1] * w1 + eig.P[1][1] * w2)};
}

namespace detail {

struct PrincipalAtCenter {
  cplx a11, a_mixed, a22;
};

inline PrincipalAtCenter pivot_data(const std::array<std::array<TaylorPoly2, 2>, 2>& A) {
  PrincipalAtCenter pc{A[0][0](0, 0), A[0][1](0, 0) + A[1][0](0, 0), A[1][1](0, 0)};
  if (std::abs(pc.a11) < kPivotTolerance) throw Error("pivot failure: rotate coordinates");
  return pc;
}

// Solves the layer system  div(A^c grad) [layer ell+2 of F] = rhs  by forward
// substitution in jx, with F_{0,ell+2} = F_{1,ell+1} = 0 held fixed.
inline void sweep_layer(TaylorPoly2& F, int ell, const std::vector<cplx>& rhs, const PrincipalAtCenter& pc,
                        SweepStats* stats) {
  F(0, ell + 2) = 0.0;
  F(1, ell + 1) = 0.0;
  for (int jx = 0; jx <= ell; ++jx) {
    const int jy = ell - jx;
    const cplx known = static_cast<double>((jx + 1) * (jy + 1)) * pc.a_mixed * F(jx + 1, jy + 1) +
                       static_cast<double>((jy + 2) * (jy + 1)) * pc.a22 * F(jx, jy + 2);
    F(jx + 2, jy) = (rhs[jx] - known) / (static_cast<double>((jx + 2) * (jx + 1)) * pc.a11);
    if (stats) ++stats->updates;
  }
}

inline void require_q(int q) {
  if (q < 1) throw Error("q must be a positive integer");
}

}  // namespace detail

/// Amplitude polynomial Q of degree q+1 with mu_00 = 1, mu_10 = mu_01 = 0 and
/// mu_{0,l+2} = mu_{1,l+1} = 0, the rest fixed by the layer equations.
inline AmplitudeGPW construct_amplitude_gpw(const OperatorSpec& op, Point center, Direction d, int q,
                                            SweepStats* stats = nullptr) {
  detail::require_q(q);
  const auto k = conjugated_coefficients(op, center, d.pair(), q - 1);
  const auto pc = detail::pivot_data(k.A);
  TaylorPoly2 Q(center, q + 1);
  Q(0, 0) = 1.0;
  for (int ell = 0; ell <= q - 1; ++ell) {
    auto rhs = conjugated_amplitude_layer(k, Q, ell);
    for (auto& r : rhs) r = -r;
    detail::sweep_layer(Q, ell, rhs, pc, stats);
  }
  return {center, d, q, std::move(Q)};
}

/// Phase polynomial P of degree q+1 with P_00 = 0, first-order part d and
/// P_{0,l+2} = P_{1,l+1} = 0.
inline PhaseGPW construct_phase_gpw(const OperatorSpec& op, Point center, Direction d, int q,
                                    SweepStats* stats = nullptr) {
  detail::require_q(q);
  const auto k = phase_coefficients(op, center, q - 1);
  const auto pc = detail::pivot_data(k.A);
  TaylorPoly2 P(center, q + 1);
  P(1, 0) = d.lambda10;
  P(0, 1) = d.lambda01;
  for (int ell = 0; ell <= q - 1; ++ell) {
    auto rhs = conjugated_phase_layer(k, P, ell);
    for (auto& r : rhs) r = -r;
    detail::sweep_layer(P, ell, rhs, pc, stats);
  }
  return {center, q, std::move(P)};
}

/// Largest coefficient of the conjugated residual through degree q-1.
inline double certificate_residual(const OperatorSpec& op, const AmplitudeGPW& g) {
  return conjugated_amplitude_operator(op, g.Q, g.direction.pair(), g.q - 1).max_abs();
}

inline double certificate_residual(const OperatorSpec& op, const PhaseGPW& g) {
  return conjugated_phase_operator(op, g.P, g.q - 1).max_abs();
}

/// Scale for the relative certificate test: 1 + max |coefficient|.
inline double certificate_scale(const AmplitudeGPW& g) { return 1.0 + g.Q.max_abs(); }
inline double certificate_scale(const PhaseGPW& g) { return 1.0 + g.P.max_abs(); }

inline constexpr double kDefaultAngleOffset = std::numbers::pi / 6;

/// theta_k = 2 k pi / p + offset, k = 0..p-1.
inline std::vector<double> angle_set(int p, double offset = kDefaultAngleOffset) {
  if (p < 1) throw Error("p must be a positive integer");
  std::vector<double> angles(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) angles[k] = 2.0 * k * std::numbers::pi / p + offset;
  return angles;
}

inline std::vector<AmplitudeGPW> gpw_family(const OperatorSpec& op, Point center, int p, int q,
                                            double angle_offset = kDefaultAngleOffset,
                                            Normalization mode = Normalization::general) {
  std::vector<AmplitudeGPW> family;
  for (double theta : angle_set(p, angle_offset))
    family.push_back(construct_amplitude_gpw(op, center, normalize_direction(op, center, theta, mode), q));
  return family;
}

inline std::vector<PhaseGPW> phase_gpw_family(const OperatorSpec& op, Point center, int p, int q,
                                              double angle_offset = kDefaultAngleOffset,
                                              Normalization mode = Normalization::general) {
  std::vector<PhaseGPW> family;
  for (double theta : angle_set(p, angle_offset))
    family.push_back(construct_phase_gpw(op, center, normalize_direction(op, center, theta, mode), q));
  return family;
}

inline cplx evaluate(const AmplitudeGPW& g, Point p) { return g.evaluate(p); }
inline cplx evaluate(const PhaseGPW& g, Point p) { return g.evaluate(p); }
inline CplxPair evaluate_gradient(const AmplitudeGPW& g, Point p) { return g.gradient(p); }
inline CplxPair evaluate_gradient(const PhaseGPW& g, Point p) { return g.gradient(p); }

}  // namespace gpw
