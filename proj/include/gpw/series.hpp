// Truncated bivariate Taylor polynomials and univariate Taylor sequences.
//
// A TaylorPoly2 of degree D stores the (D+1)(D+2)/2 coefficients c_{ix,iy} of
//   sum_{ix+iy<=D} c_{ix,iy} (x-xc)^ix (y-yc)^iy
// in graded order: linear index (ix+iy)(ix+iy+1)/2 + iy.  Every operation takes
// an explicit truncation bound; nothing is promoted to a higher degree.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gpw {

using cplx = std::complex<double>;

/// Errors raised by the library; the message is the user-facing diagnostic.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

struct CplxPair {
  cplx x;
  cplx y;
};

enum class Axis { x, y };

constexpr std::size_t triangular_size(int degree) {
  return degree < 0 ? 0 : static_cast<std::size_t>(degree + 1) * static_cast<std::size_t>(degree + 2) / 2;
}

struct MultiIndex2 {
  int ix = 0;
  int iy = 0;

  constexpr int degree() const { return ix + iy; }
  constexpr std::size_t linear() const {
    return triangular_size(degree() - 1) + static_cast<std::size_t>(iy);
  }
  static constexpr MultiIndex2 from_linear(std::size_t k) {
    int d = 0;
    while (triangular_size(d) <= k) ++d;
    const int iy = static_cast<int>(k - triangular_size(d - 1));
    return {d - iy, iy};
  }
  friend constexpr bool operator==(const MultiIndex2&, const MultiIndex2&) = default;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline void require_same_center(Point a, Point b) {
  if (!(a == b)) throw Error("center mismatch");
}

}  // namespace detail

class TaylorPoly2 {
 public:
  TaylorPoly2() : TaylorPoly2(Point{}, 0) {}
  TaylorPoly2(Point center, int degree)
      : center_(center), degree_(degree), coeffs_(triangular_size(degree)) {
    if (degree < 0) throw Error("negative degree");
  }
  TaylorPoly2(Point center, int degree, std::vector<cplx> coeffs)
      : center_(center), degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree < 0 || coeffs_.size() != triangular_size(degree))
      throw Error("coefficient array length does not match degree");
  }

  static TaylorPoly2 constant(Point center, int degree, cplx value) {
    TaylorPoly2 p(center, degree);
    p.coeffs_[0] = value;
    return p;
  }

  Point center() const { return center_; }
  int degree() const { return degree_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }

  cplx& operator()(int ix, int iy) { return coeffs_[MultiIndex2{ix, iy}.linear()]; }
  const cplx& operator()(int ix, int iy) const { return coeffs_[MultiIndex2{ix, iy}.linear()]; }

  /// Coefficient of (x-xc)^ix (y-yc)^iy, zero beyond the stored degree.
  cplx coeff(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix + iy > degree_) return {};
    return (*this)(ix, iy);
  }

  TaylorPoly2 truncated(int bound) const {
    if (bound < 0 || bound > degree_) throw Error("truncation bound outside [0, degree]");
    return TaylorPoly2(center_, bound,
                       std::vector<cplx>(coeffs_.begin(), coeffs_.begin() + triangular_size(bound)));
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  TaylorPoly2& operator+=(const TaylorPoly2& o) {
    detail::require_same_center(center_, o.center_);
    if (o.degree_ != degree_) throw Error("degree mismatch in addition");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  TaylorPoly2& operator-=(const TaylorPoly2& o) {
    detail::require_same_center(center_, o.center_);
    if (o.degree_ != degree_) throw Error("degree mismatch in subtraction");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  TaylorPoly2& operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend TaylorPoly2 operator+(TaylorPoly2 a, const TaylorPoly2& b) { return a += b; }
  friend TaylorPoly2 operator-(TaylorPoly2 a, const TaylorPoly2& b) { return a -= b; }
  friend TaylorPoly2 operator*(TaylorPoly2 a, cplx s) { return a *= s; }
  friend TaylorPoly2 operator*(cplx s, TaylorPoly2 a) { return a *= s; }
  friend TaylorPoly2 operator-(TaylorPoly2 a) { return a *= -1.0; }

  /// Value at `p`, accumulated layer by layer over total degree.
  cplx evaluate(Point p) const {
    const double dx = p.x - center_.x;
    const double dy = p.y - center_.y;
    const auto px = powers(dx);
    const auto py = powers(dy);
    cplx sum{};
    for (int ell = degree_; ell >= 0; --ell) {
      cplx layer{};
      for (int ix = 0; ix <= ell; ++ix) layer += (*this)(ix, ell - ix) * (px[ix] * py[ell - ix]);
      sum += layer;
    }
    return sum;
  }

  CplxPair gradient(Point p) const {
    const double dx = p.x - center_.x;
    const double dy = p.y - center_.y;
    const auto px = powers(dx);
    const auto py = powers(dy);
    cplx gx{}, gy{};
    for (int ell = degree_; ell >= 1; --ell) {
      for (int ix = 0; ix <= ell; ++ix) {
        const int iy = ell - ix;
        const cplx c = (*this)(ix, iy);
        if (ix > 0) gx += c * (ix * px[ix - 1] * py[iy]);
        if (iy > 0) gy += c * (iy * px[ix] * py[iy - 1]);
      }
    }
    return {gx, gy};
  }

 private:
  std::vector<double> powers(double t) const {
    std::vector<double> p(static_cast<std::size_t>(degree_) + 1, 1.0);
    for (int k = 1; k <= degree_; ++k) p[k] = p[k - 1] * t;
    return p;
  }

  Point center_;
  int degree_;
  std::vector<cplx> coeffs_;
};

/// Taylor coefficients a_0..a_D of a scalar function about `center`.
struct UniSeries {
  double center = 0.0;
  std::vector<cplx> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  cplx evaluate(double x) const {
    const double t = x - center;
    cplx sum{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) sum = sum * t + *it;
    return sum;
  }
};

inline TaylorPoly2 truncated_multiply(const TaylorPoly2& a, const TaylorPoly2& b, int bound) {
  detail::require_same_center(a.center(), b.center());
  if (bound < 0) throw Error("negative truncation bound");
  TaylorPoly2 out(a.center(), bound);
  const int da = std::min(a.degree(), bound);
  for (int la = 0; la <= da; ++la) {
    const int db = std::min(b.degree(), bound - la);
    for (int ia = 0; ia <= la; ++ia) {
      const cplx ca = a(ia, la - ia);
      if (ca == cplx{}) continue;
      for (int lb = 0; lb <= db; ++lb) {
        for (int ib = 0; ib <= lb; ++ib) {
          out(ia + ib, la - ia + lb - ib) += ca * b(ib, lb - ib);
        }
      }
    }
  }
  return out;
}

/// Coefficients of total degree `ell` of a*b, in increasing ix; only that layer
/// is formed.
inline std::vector<cplx> product_layer(const TaylorPoly2& a, const TaylorPoly2& b, int ell) {
  detail::require_same_center(a.center(), b.center());
  std::vector<cplx> out(static_cast<std::size_t>(ell) + 1);
  for (int la = std::max(0, ell - b.degree()); la <= std::min(ell, a.degree()); ++la) {
    const int lb = ell - la;
    for (int ia = 0; ia <= la; ++ia) {
      const cplx ca = a(ia, la - ia);
      if (ca == cplx{}) continue;
      for (int ib = 0; ib <= lb; ++ib) out[ia + ib] += ca * b(ib, lb - ib);
    }
  }
  return out;
}

inline TaylorPoly2 differentiate(const TaylorPoly2& a, Axis axis) {
  if (a.degree() == 0) return TaylorPoly2(a.center(), 0);
  TaylorPoly2 out(a.center(), a.degree() - 1);
  for (int ell = 0; ell <= out.degree(); ++ell) {
    for (int ix = 0; ix <= ell; ++ix) {
      const int iy = ell - ix;
      out(ix, iy) = axis == Axis::x ? static_cast<double>(ix + 1) * a(ix + 1, iy)
                                    : static_cast<double>(iy + 1) * a(ix, iy + 1);
    }
  }
  return out;
}

/// c_{ix, ell-ix} for ix = 0..ell.
inline std::vector<cplx> homogeneous_part(const TaylorPoly2& a, int ell) {
  if (ell < 0 || ell > a.degree()) throw Error("homogeneous layer outside [0, degree]");
  const auto begin = a.coeffs().begin() + static_cast<std::ptrdiff_t>(triangular_size(ell - 1));
  std::vector<cplx> layer(begin, begin + ell + 1);
  std::reverse(layer.begin(), layer.end());
  return layer;
}

inline void set_homogeneous_part(TaylorPoly2& a, int ell, std::span<const cplx> layer) {
  if (ell < 0 || ell > a.degree() || layer.size() != static_cast<std::size_t>(ell) + 1)
    throw Error("homogeneous layer outside [0, degree]");
  for (int ix = 0; ix <= ell; ++ix) a(ix, ell - ix) = layer[ix];
}

/// Embeds u(x) (axis x) or u(y) (axis y) as a bivariate polynomial centered at
/// `center`; the axis coordinate of `center` must equal u.center.
inline TaylorPoly2 univariate_to_bivariate(const UniSeries& u, Axis axis, int bound, Point center) {
  if (bound < 0 || bound > u.degree()) throw Error("truncation bound exceeds series degree");
  const double expected = axis == Axis::x ? center.x : center.y;
  if (expected != u.center) throw Error("center mismatch");
  TaylorPoly2 out(center, bound);
  for (int k = 0; k <= bound; ++k) {
    if (axis == Axis::x)
      out(k, 0) = u.coeffs[k];
    else
      out(0, k) = u.coeffs[k];
  }
  return out;
}

/// Shorthand when the other coordinate of the center is irrelevant (zero).
inline TaylorPoly2 univariate_to_bivariate(const UniSeries& u, Axis axis, int bound) {
  const Point c = axis == Axis::x ? Point{u.center, 0.0} : Point{0.0, u.center};
  return univariate_to_bivariate(u, axis, bound, c);
}

enum class ElementaryKind { exp, cos, sin };

inline ElementaryKind elementary_kind_from_string(std::string_view name) {
  if (name == "exp") return ElementaryKind::exp;
  if (name == "cos") return ElementaryKind::cos;
  if (name == "sin") return ElementaryKind::sin;
  throw Error("unknown elementary function '" + std::string(name) + "'");
}

inline UniSeries elementary_series(ElementaryKind kind, double center, int degree) {
  if (degree < 0) throw Error("negative degree");
  UniSeries u{center, std::vector<cplx>(static_cast<std::size_t>(degree) + 1)};
  if (kind == ElementaryKind::exp) {
    const double e = std::exp(center);
    double inv_fact = 1.0;
    for (int k = 0; k <= degree; ++k) {
      if (k > 0) inv_fact /= k;
      u.coeffs[k] = e * inv_fact;
    }
    return u;
  }
  // derivatives of cos cycle through cos, -sin, -cos, sin; sin is cos shifted by one
  const double c = std::cos(center);
  const double s = std::sin(center);
  const double cycle_cos[4] = {c, -s, -c, s};
  const int shift = kind == ElementaryKind::sin ? 3 : 0;
  double inv_fact = 1.0;
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) inv_fact /= k;
    u.coeffs[k] = cycle_cos[(k + shift) % 4] * inv_fact;
  }
  return u;
}

/// Jet of exp(a) through `bound`, from the homogeneous-degree recurrence
/// k E_k = sum_{j=1..k} j a_j E_{k-j}.
inline TaylorPoly2 exp_jet(const TaylorPoly2& a, int bound) {
  if (bound < 0) throw Error("negative truncation bound");
  TaylorPoly2 e(a.center(), bound);
  e(0, 0) = std::exp(a.coeff(0, 0));
  for (int k = 1; k <= bound; ++k) {
    std::vector<cplx> layer(static_cast<std::size_t>(k) + 1);
    for (int j = 1; j <= std::min(k, a.degree()); ++j) {
      // (homogeneous a_j) * (homogeneous E_{k-j}) lands in layer k
      const int m = k - j;
      for (int ia = 0; ia <= j; ++ia) {
        const cplx ca = a(ia, j - ia) * static_cast<double>(j);
        if (ca == cplx{}) continue;
        for (int ie = 0; ie <= m; ++ie) layer[ia + ie] += ca * e(ie, m - ie);
      }
    }
    for (int ix = 0; ix <= k; ++ix) e(ix, k - ix) = layer[ix] / static_cast<double>(k);
  }
  return e;
}

/// Jet of exp(d . (r - center)) through `bound`: d_x^jx d_y^jy / (jx! jy!).
inline TaylorPoly2 linear_exp_jet(Point center, cplx dx, cplx dy, int bound) {
  TaylorPoly2 e(center, bound);
  std::vector<cplx> px(static_cast<std::size_t>(bound) + 1, 1.0), py(px);
  for (int k = 1; k <= bound; ++k) {
    px[k] = px[k - 1] * dx / static_cast<double>(k);
    py[k] = py[k - 1] * dy / static_cast<double>(k);
  }
  for (int ell = 0; ell <= bound; ++ell)
    for (int ix = 0; ix <= ell; ++ix) e(ix, ell - ix) = px[ix] * py[ell - ix];
  return e;
}

/// Jet of f(alpha (x-xc) + beta (y-yc)) from f's series about alpha*xc + beta*yc
/// (shifted so f's center corresponds to the bivariate center).
inline TaylorPoly2 compose_linear(const UniSeries& f, double alpha, double beta, Point center, int bound) {
  if (bound > f.degree()) throw Error("truncation bound exceeds series degree");
  TaylorPoly2 out(center, bound);
  // (alpha X + beta Y)^k / contributes binom(k, ix) alpha^ix beta^(k-ix)
  for (int k = 0; k <= bound; ++k) {
    double binom = 1.0;
    for (int ix = 0; ix <= k; ++ix) {
      if (ix > 0) binom = binom * (k - ix + 1) / ix;
      out(ix, k - ix) = f.coeffs[k] * (binom * std::pow(alpha, ix) * std::pow(beta, k - ix));
    }
  }
  return out;
}

}  // namespace gpw
