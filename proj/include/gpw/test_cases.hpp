// Built-in variable-coefficient problems with known exact solutions.
//
// Each operator is registered in divergence form div(A grad) + V . grad + s.
// Where a tabulated operator is written with non-divergence second-order
// terms (cs, JJ), V absorbs -div A so that the registered operator is the
// one the exact solution satisfies.

#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gpw/operator_model.hpp"
#include "gpw/special_functions.hpp"

namespace gpw {

struct Rectangle {
  double xmin, xmax, ymin, ymax;

  bool contains(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
};

struct TestCase {
  std::string label;
  std::string description;
  OperatorSpec op;
  Rectangle domain;
  std::function<cplx(Point)> exact_value;
  std::function<CplxPair(Point)> exact_gradient;
  std::function<TaylorPoly2(Point, int)> exact_taylor;
};

namespace cases_detail {

using UniGen = CoefficientField::UniGenerator;

// one-dimensional factor of a separable solution
struct Factor {
  std::function<cplx(double)> value;
  std::function<cplx(double)> derivative;
  UniGen series;  // Taylor sequence about a center, degree >= 0
};

inline Factor exp_i() {
  const cplx I(0.0, 1.0);
  return {[I](double t) { return std::exp(I * t); }, [I](double t) { return I * std::exp(I * t); },
          [I](double c, int d) {
            UniSeries u{c, std::vector<cplx>(static_cast<std::size_t>(d) + 1)};
            cplx term = std::exp(I * c);
            for (int k = 0; k <= d; ++k) {
              u.coeffs[k] = term;
              term *= I / static_cast<double>(k + 1);
            }
            return u;
          }};
}

inline Factor cosine() {
  return {[](double t) { return cplx(std::cos(t)); }, [](double t) { return cplx(-std::sin(t)); },
          CoefficientField::elementary(ElementaryKind::cos)};
}

inline Factor sine() {
  return {[](double t) { return cplx(std::sin(t)); }, [](double t) { return cplx(std::cos(t)); },
          CoefficientField::elementary(ElementaryKind::sin)};
}

inline Factor airy() {
  return {[](double t) { return cplx(special::airy_ai(t)); }, [](double t) { return cplx(special::airy_ai_prime(t)); },
          [](double c, int d) {
            UniSeries u = special::airy_taylor(c, std::max(d, 1));
            u.coeffs.resize(static_cast<std::size_t>(d) + 1);
            return u;
          }};
}

inline Factor bessel(int nu) {
  return {[nu](double t) { return cplx(special::bessel_j(nu, t)); },
          [nu](double t) { return cplx(special::bessel_j_prime(nu, t)); },
          [nu](double c, int d) {
            UniSeries u = special::bessel_taylor(nu, c, std::max(d, 1));
            u.coeffs.resize(static_cast<std::size_t>(d) + 1);
            return u;
          }};
}

inline void attach_separable(TestCase& tc, Factor fx, Factor fy) {
  tc.exact_value = [fx, fy](Point p) { return fx.value(p.x) * fy.value(p.y); };
  tc.exact_gradient = [fx, fy](Point p) {
    return CplxPair{fx.derivative(p.x) * fy.value(p.y), fx.value(p.x) * fy.derivative(p.y)};
  };
  tc.exact_taylor = [fx, fy](Point c, int n) {
    const TaylorPoly2 a = univariate_to_bivariate(fx.series(c.x, n), Axis::x, n, c);
    const TaylorPoly2 b = univariate_to_bivariate(fy.series(c.y, n), Axis::y, n, c);
    return truncated_multiply(a, b, n);
  };
}

inline CoefficientField c(double v) { return CoefficientField::constant(v); }
inline CoefficientField poly(std::vector<CoefficientField::Monomial> m) {
  return CoefficientField::polynomial(std::move(m));
}

}  // namespace cases_detail

inline std::vector<TestCase> builtin_test_cases() {
  using namespace cases_detail;
  using CF = CoefficientField;
  std::vector<TestCase> cases;
  const double two_pi = 2.0 * std::numbers::pi;

  {
    TestCase tc;
    tc.label = "Ae";
    tc.description = "Delta - (x-1) on [-2,2]^2, u = Ai(x) exp(iy)";
    tc.op = helmholtz_operator(poly({{1.0, 0, 0}, {-1.0, 1, 0}}), tc.label);
    tc.domain = {-2, 2, -2, 2};
    attach_separable(tc, airy(), exp_i());
    cases.push_back(std::move(tc));
  }
  {
    TestCase tc;
    tc.label = "Ac";
    tc.description = "Delta - (x-1) on [-2,2]^2, u = Ai(x) cos(y)";
    tc.op = helmholtz_operator(poly({{1.0, 0, 0}, {-1.0, 1, 0}}), tc.label);
    tc.domain = {-2, 2, -2, 2};
    attach_separable(tc, airy(), cosine());
    cases.push_back(std::move(tc));
  }
  {
    TestCase tc;
    tc.label = "A+";
    tc.description = "Delta - 2(x+y) on [-2,2]^2, u = Ai(x+y)";
    tc.op = helmholtz_operator(poly({{-2.0, 1, 0}, {-2.0, 0, 1}}), tc.label);
    tc.domain = {-2, 2, -2, 2};
    tc.exact_value = [](Point p) { return cplx(special::airy_ai(p.x + p.y)); };
    tc.exact_gradient = [](Point p) {
      const double d = special::airy_ai_prime(p.x + p.y);
      return CplxPair{d, d};
    };
    tc.exact_taylor = [](Point ctr, int n) {
      UniSeries u = special::airy_taylor(ctr.x + ctr.y, std::max(n, 1));
      u.coeffs.resize(static_cast<std::size_t>(n) + 1);
      return compose_linear(u, 1.0, 1.0, ctr, n);
    };
    cases.push_back(std::move(tc));
  }
  {
    // d_xx + 0.2 cos x sin y d_xy - 2 d_yy + (0.2 sin x cos y - 1), mixed term split
    // symmetrically: A12 = A21 = 0.1 cos x sin y, and V = -div A.
    TestCase tc;
    tc.label = "cs";
    tc.description = "d_xx + 0.2 cos x sin y d_xy - 2 d_yy + (0.2 sin x cos y - 1) on [-1,1]^2, u = cos x sin y";
    const auto cosg = CF::elementary(ElementaryKind::cos);
    const auto sing = CF::elementary(ElementaryKind::sin);
    OperatorSpec op;
    const CF a12 = CF::separable(0.1, cosg, sing);
    op.A = {{{c(1.0), a12}, {a12, c(-2.0)}}};
    // d_y A21 = 0.1 cos x cos y, d_x A12 = -0.1 sin x sin y
    op.V = {CF::separable(-0.1, cosg, cosg), CF::separable(0.1, sing, sing)};
    op.s = CF::separable(0.2, sing, cosg) + c(-1.0);
    op.label = tc.label;
    tc.op = std::move(op);
    tc.domain = {-1, 1, -1, 1};
    attach_separable(tc, cosine(), sine());
    cases.push_back(std::move(tc));
  }
  {
    TestCase tc;
    tc.label = "ey";
    tc.description = "Delta + 1 on [-1,1]x[0,2pi], u = exp(iy)";
    tc.op = helmholtz_operator(c(1.0), tc.label);
    tc.domain = {-1, 1, 0, two_pi};
    const Factor one{[](double) { return cplx(1.0); }, [](double) { return cplx(0.0); }, CF::one()};
    attach_separable(tc, one, exp_i());
    cases.push_back(std::move(tc));
  }
  {
    // div(x^2 grad) - x d_x + cos y d_y - (1 - 2x^2 - sin y)
    TestCase tc;
    tc.label = "Jc";
    tc.description = "div(x^2 grad) - x d_x + cos y d_y - (1 - 2x^2 - sin y) on [1,5]x[0,2pi], u = J1(x) cos y";
    OperatorSpec op;
    const CF x2 = poly({{1.0, 2, 0}});
    op.A = {{{x2, c(0.0)}, {c(0.0), x2}}};
    op.V = {poly({{-1.0, 1, 0}}), CF::separable(1.0, CF::one(), CF::elementary(ElementaryKind::cos))};
    op.s = poly({{-1.0, 0, 0}, {2.0, 2, 0}}) + CF::separable(1.0, CF::one(), CF::elementary(ElementaryKind::sin));
    op.label = tc.label;
    tc.op = std::move(op);
    tc.domain = {1, 5, 0, two_pi};
    attach_separable(tc, bessel(1), cosine());
    cases.push_back(std::move(tc));
  }
  {
    // x^2 d_xx + y^2 d_yy + x d_x + y d_y + (x^2 + y^2 - 1); A = diag(x^2, y^2), V = (x, y) - div A
    TestCase tc;
    tc.label = "JJ";
    tc.description = "x^2 d_xx + y^2 d_yy + x d_x + y d_y + (x^2 + y^2 - 1) on [1,3]x[0,3], u = J0(x) J1(y)";
    OperatorSpec op;
    op.A = {{{poly({{1.0, 2, 0}}), c(0.0)}, {c(0.0), poly({{1.0, 0, 2}})}}};
    op.V = {poly({{-1.0, 1, 0}}), poly({{-1.0, 0, 1}})};
    op.s = poly({{-1.0, 0, 0}, {1.0, 2, 0}, {1.0, 0, 2}});
    op.label = tc.label;
    tc.op = std::move(op);
    tc.domain = {1, 3, 0, 3};
    attach_separable(tc, bessel(0), bessel(1));
    cases.push_back(std::move(tc));
  }
  return cases;
}

inline std::string builtin_case_labels() {
  std::string out;
  for (const auto& tc : builtin_test_cases()) out += (out.empty() ? "" : ", ") + tc.label;
  return out;
}

inline TestCase find_test_case(const std::string& label) {
  for (auto& tc : builtin_test_cases())
    if (tc.label == label) return tc;
  throw Error("unknown case '" + label + "'; valid labels: " + builtin_case_labels());
}

}  // namespace gpw
