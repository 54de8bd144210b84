// Second-order operators L = div(A grad) + V . grad + s with coefficient fields
// that emit local Taylor data, and the exp-conjugated forms of L used by the
// amplitude- and phase-based constructions.

#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gpw/series.hpp"

namespace gpw {

/// Scalar coefficient known through its local Taylor polynomials.
class CoefficientField {
 public:
  using Generator = std::function<TaylorPoly2(Point, int)>;
  using UniGenerator = std::function<UniSeries(double, int)>;

  CoefficientField() : CoefficientField(constant(0.0)) {}
  CoefficientField(Generator g, bool is_zero = false) : gen_(std::move(g)), zero_(is_zero) {}

  TaylorPoly2 taylor_at(Point center, int degree) const {
    if (zero_) return TaylorPoly2(center, degree);
    return gen_(center, degree);
  }
  cplx value_at(Point p) const { return taylor_at(p, 0)(0, 0); }
  bool is_zero() const { return zero_; }

  static CoefficientField constant(cplx v) {
    if (v == cplx{}) return CoefficientField([](Point c, int d) { return TaylorPoly2(c, d); }, true);
    return CoefficientField([v](Point c, int d) { return TaylorPoly2::constant(c, d, v); });
  }

  /// Global polynomial sum_k coef_k x^px_k y^py_k, re-expanded about each center.
  struct Monomial {
    double coef;
    int px;
    int py;
  };
  static CoefficientField polynomial(std::vector<Monomial> terms) {
    return CoefficientField([terms = std::move(terms)](Point c, int d) {
      TaylorPoly2 out(c, d);
      for (const auto& t : terms) {
        // (X + xc)^px (Y + yc)^py, binomially expanded
        double bx = 1.0;
        for (int i = 0; i <= t.px; ++i) {
          if (i > 0) bx = bx * (t.px - i + 1) / i;
          double by = 1.0;
          for (int j = 0; j <= t.py; ++j) {
            if (j > 0) by = by * (t.py - j + 1) / j;
            if (i + j > d) continue;
            out(i, j) += t.coef * bx * by * std::pow(c.x, t.px - i) * std::pow(c.y, t.py - j);
          }
        }
      }
      return out;
    });
  }

  /// scale * f(x) * g(y) from univariate generators.
  static CoefficientField separable(cplx scale, UniGenerator fx, UniGenerator fy) {
    return CoefficientField([=](Point c, int d) {
      const TaylorPoly2 a = univariate_to_bivariate(fx(c.x, d), Axis::x, d, c);
      const TaylorPoly2 b = univariate_to_bivariate(fy(c.y, d), Axis::y, d, c);
      return truncated_multiply(a, b, d) * scale;
    });
  }

  static UniGenerator elementary(ElementaryKind kind) {
    return [kind](double c, int d) { return elementary_series(kind, c, d); };
  }
  static UniGenerator one() {
    return [](double c, int d) {
      UniSeries u{c, std::vector<cplx>(static_cast<std::size_t>(d) + 1)};
      u.coeffs[0] = 1.0;
      return u;
    };
  }

  friend CoefficientField operator+(const CoefficientField& a, const CoefficientField& b) {
    if (a.zero_) return b;
    if (b.zero_) return a;
    return CoefficientField([a, b](Point c, int d) { return a.taylor_at(c, d) + b.taylor_at(c, d); });
  }

 private:
  Generator gen_;
  bool zero_ = false;
};

/// L = div(A grad) + V . grad + s.
struct OperatorSpec {
  std::array<std::array<CoefficientField, 2>, 2> A;
  std::array<CoefficientField, 2> V;
  CoefficientField s;
  std::string label;

  /// A(center), which must be real symmetric.
  std::array<std::array<double, 2>, 2> principal_at(Point center) const {
    std::array<std::array<double, 2>, 2> m{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const cplx v = A[i][j].value_at(center);
        if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real())))
          throw Error("principal part must be real at the center");
        m[i][j] = v.real();
      }
    if (std::abs(m[0][1] - m[1][0]) > 1e-14 * (1.0 + std::abs(m[0][1])))
      throw Error("principal part must be symmetric at the center");
    return m;
  }
};

/// Helmholtz-type operator Delta + s (A = I, V = 0).
inline OperatorSpec helmholtz_operator(CoefficientField s, std::string label) {
  OperatorSpec op;
  op.A = {{{CoefficientField::constant(1.0), CoefficientField::constant(0.0)},
           {CoefficientField::constant(0.0), CoefficientField::constant(1.0)}}};
  op.V = {CoefficientField::constant(0.0), CoefficientField::constant(0.0)};
  op.s = std::move(s);
  op.label = std::move(label);
  return op;
}

namespace detail {

inline void require_jet_order(const TaylorPoly2& u, int out_degree) {
  if (out_degree < 0) throw Error("negative output degree");
  if (u.degree() < out_degree + 2) throw Error("insufficient jet order");
}

}  // namespace detail

/// Taylor polynomial of L u about u's center, exact through `out_degree`.
inline TaylorPoly2 apply_operator_taylor(const OperatorSpec& op, const TaylorPoly2& u, int out_degree) {
  detail::require_jet_order(u, out_degree);
  const Point c = u.center();
  const int n = out_degree;
  const TaylorPoly2 ux = differentiate(u, Axis::x);
  const TaylorPoly2 uy = differentiate(u, Axis::y);
  const TaylorPoly2 grad[2] = {ux, uy};
  TaylorPoly2 out(c, n);
  for (int i = 0; i < 2; ++i) {
    TaylorPoly2 flux(c, n + 1);
    for (int j = 0; j < 2; ++j) flux += truncated_multiply(op.A[i][j].taylor_at(c, n + 1), grad[j], n + 1);
    out += differentiate(flux, i == 0 ? Axis::x : Axis::y);
    out += truncated_multiply(op.V[i].taylor_at(c, n), grad[i], n);
  }
  out += truncated_multiply(op.s.taylor_at(c, n), u, n);
  return out;
}

/// Coefficients of e^{-d.r} L (Q e^{d.r}) = A : Hess Q + Vt . grad Q + st Q, with
///   Vt = (A + A^T) d + V + div A,
///   st = d^T A d + (div A) . d + V . d + s,
/// where (div A)_j = d_x A_{1j} + d_y A_{2j}.  All fields through `degree`.
struct ConjugatedCoefficients {
  std::array<std::array<TaylorPoly2, 2>, 2> A;
  std::array<TaylorPoly2, 2> Vt;
  TaylorPoly2 st;
};

inline ConjugatedCoefficients conjugated_coefficients(const OperatorSpec& op, Point c, CplxPair d, int degree) {
  ConjugatedCoefficients k;
  std::array<std::array<TaylorPoly2, 2>, 2> a_ext;  // one extra order for div A
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a_ext[i][j] = op.A[i][j].taylor_at(c, degree + 1);
      k.A[i][j] = a_ext[i][j].truncated(degree);
    }
  const cplx dv[2] = {d.x, d.y};
  std::array<TaylorPoly2, 2> divA;
  for (int j = 0; j < 2; ++j)
    divA[j] = differentiate(a_ext[0][j], Axis::x) + differentiate(a_ext[1][j], Axis::y);
  k.st = op.s.taylor_at(c, degree);
  for (int i = 0; i < 2; ++i) {
    const TaylorPoly2 vi = op.V[i].taylor_at(c, degree);
    k.Vt[i] = vi + divA[i];
    for (int j = 0; j < 2; ++j) {
      k.Vt[i] += (k.A[i][j] + k.A[j][i]) * dv[j];
      k.st += k.A[i][j] * (dv[i] * dv[j]);
    }
    k.st += (divA[i] + vi) * dv[i];
  }
  return k;
}

/// Degree-`ell` layer of A : Hess Q + Vt . grad Q + st Q.
inline std::vector<cplx> conjugated_amplitude_layer(const ConjugatedCoefficients& k, const TaylorPoly2& Q, int ell) {
  const TaylorPoly2 qx = differentiate(Q, Axis::x);
  const TaylorPoly2 qy = differentiate(Q, Axis::y);
  const TaylorPoly2 qxx = differentiate(qx, Axis::x);
  const TaylorPoly2 qxy = differentiate(qx, Axis::y);
  const TaylorPoly2 qyy = differentiate(qy, Axis::y);
  std::vector<cplx> out(static_cast<std::size_t>(ell) + 1);
  auto accumulate = [&](const TaylorPoly2& f, const TaylorPoly2& g) {
    const auto layer = product_layer(f, g, ell);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += layer[i];
  };
  accumulate(k.A[0][0], qxx);
  accumulate(k.A[0][1] + k.A[1][0], qxy);
  accumulate(k.A[1][1], qyy);
  accumulate(k.Vt[0], qx);
  accumulate(k.Vt[1], qy);
  accumulate(k.st, Q);
  return out;
}

/// Taylor polynomial through `out_degree` of e^{-d.r} L (Q e^{d.r}).
inline TaylorPoly2 conjugated_amplitude_operator(const OperatorSpec& op, const TaylorPoly2& Q, CplxPair d,
                                                 int out_degree) {
  detail::require_jet_order(Q, out_degree);
  const auto k = conjugated_coefficients(op, Q.center(), d, out_degree);
  TaylorPoly2 out(Q.center(), out_degree);
  for (int ell = 0; ell <= out_degree; ++ell) set_homogeneous_part(out, ell, conjugated_amplitude_layer(k, Q, ell));
  return out;
}

/// Local data of e^{-P} L e^{P} = A : Hess P + (div A + V) . grad P + grad P^T A grad P + s.
struct PhaseCoefficients {
  std::array<std::array<TaylorPoly2, 2>, 2> A;
  std::array<TaylorPoly2, 2> W;  // div A + V
  TaylorPoly2 s;
};

inline PhaseCoefficients phase_coefficients(const OperatorSpec& op, Point c, int degree) {
  PhaseCoefficients k;
  std::array<std::array<TaylorPoly2, 2>, 2> a_ext;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a_ext[i][j] = op.A[i][j].taylor_at(c, degree + 1);
      k.A[i][j] = a_ext[i][j].truncated(degree);
    }
  for (int j = 0; j < 2; ++j)
    k.W[j] = differentiate(a_ext[0][j], Axis::x) + differentiate(a_ext[1][j], Axis::y) + op.V[j].taylor_at(c, degree);
  k.s = op.s.taylor_at(c, degree);
  return k;
}

inline std::vector<cplx> conjugated_phase_layer(const PhaseCoefficients& k, const TaylorPoly2& P, int ell) {
  const TaylorPoly2 px = differentiate(P, Axis::x);
  const TaylorPoly2 py = differentiate(P, Axis::y);
  const TaylorPoly2 pxx = differentiate(px, Axis::x);
  const TaylorPoly2 pxy = differentiate(px, Axis::y);
  const TaylorPoly2 pyy = differentiate(py, Axis::y);
  const TaylorPoly2 grad[2] = {px, py};
  std::vector<cplx> out(static_cast<std::size_t>(ell) + 1);
  auto accumulate = [&](const TaylorPoly2& f, const TaylorPoly2& g) {
    const auto layer = product_layer(f, g, ell);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += layer[i];
  };
  accumulate(k.A[0][0], pxx);
  accumulate(k.A[0][1] + k.A[1][0], pxy);
  accumulate(k.A[1][1], pyy);
  for (int i = 0; i < 2; ++i) {
    accumulate(k.W[i], grad[i]);
    // grad_i P * (A_ij grad_j P), the inner product truncated at ell
    for (int j = 0; j < 2; ++j) accumulate(grad[i], truncated_multiply(k.A[i][j], grad[j], ell));
  }
  const auto s_layer = homogeneous_part(k.s, ell);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s_layer[i];
  return out;
}

/// Taylor polynomial through `out_degree` of e^{-P} L e^{P}; P has no constant term.
inline TaylorPoly2 conjugated_phase_operator(const OperatorSpec& op, const TaylorPoly2& P, int out_degree) {
  detail::require_jet_order(P, out_degree);
  if (P(0, 0) != cplx{}) throw Error("phase polynomial must have zero constant term");
  const auto k = phase_coefficients(op, P.center(), out_degree);
  TaylorPoly2 out(P.center(), out_degree);
  for (int ell = 0; ell <= out_degree; ++ell) set_homogeneous_part(out, ell, conjugated_phase_layer(k, P, ell));
  return out;
}

}  // namespace gpw
