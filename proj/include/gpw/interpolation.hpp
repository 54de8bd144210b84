// Taylor-coefficient matrices of function families, Taylor matching of exact
// solutions, and rank/structure diagnostics.
//
// Row (jx, jy) of a TaylorMatrix holds d_x^jx d_y^jy f_k(center) / (jx! jy!)
// at zero-based index (jx+jy)(jx+jy+1)/2 + jy, the storage order of TaylorPoly2.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "gpw/construct.hpp"

namespace gpw {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

inline constexpr double kDefaultRankTolerance = 1e-10;

struct TaylorMatrix {
  int n = 0;
  CMatrix entries;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

/// Normalized Taylor coefficients through order n of G = Q exp(d . (r - rc)).
inline std::vector<cplx> gpw_taylor_column(const AmplitudeGPW& g, int n) {
  if (n < 0 || n > g.q + 1) throw Error("Taylor order outside [0, q+1]");
  const TaylorPoly2 e = linear_exp_jet(g.center, g.direction.lambda10, g.direction.lambda01, n);
  const TaylorPoly2 col = truncated_multiply(g.Q, e, n);
  return {col.coeffs().begin(), col.coeffs().end()};
}

/// Same for a phase-based GPW, exp(P) through order n; orders beyond q+1 are
/// still defined (the jet of exp(P) is exact) but no longer GPW-determined.
inline std::vector<cplx> gpw_taylor_column(const PhaseGPW& g, int n) {
  if (n < 0 || n > g.q + 1) throw Error("Taylor order outside [0, q+1]");
  const TaylorPoly2 col = exp_jet(g.P.truncated(std::min(n, g.P.degree())), n);
  return {col.coeffs().begin(), col.coeffs().end()};
}

/// Column of the exponential exp(d . (r - rc)) (classical or intermediate PW).
inline std::vector<cplx> plane_wave_taylor_column(Point center, Direction d, int n) {
  const TaylorPoly2 col = linear_exp_jet(center, d.lambda10, d.lambda01, n);
  return {col.coeffs().begin(), col.coeffs().end()};
}

inline TaylorMatrix build_matrix(const std::vector<std::vector<cplx>>& columns, int n) {
  const std::size_t rows = triangular_size(n);
  TaylorMatrix m{n, CMatrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns.size()))};
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].size() != rows) throw Error("ragged column input");
    for (std::size_t r = 0; r < rows; ++r) m.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = columns[k][r];
  }
  return m;
}

template <typename Family>
TaylorMatrix family_matrix(const Family& family, int n) {
  std::vector<std::vector<cplx>> cols;
  cols.reserve(family.size());
  for (const auto& g : family) cols.push_back(gpw_taylor_column(g, n));
  return build_matrix(cols, n);
}

/// M^C: classical PWs with d_k = sqrt(-s(center)) (cos theta_k, sin theta_k).
inline TaylorMatrix classical_pw_matrix(const OperatorSpec& op, Point center, int p, int n,
                                        double angle_offset = kDefaultAngleOffset) {
  std::vector<std::vector<cplx>> cols;
  for (double theta : angle_set(p, angle_offset))
    cols.push_back(plane_wave_taylor_column(center, normalize_direction(op, center, theta, Normalization::classical_pw), n));
  return build_matrix(cols, n);
}

/// M^F: the exponentials exp(d_k . (r - rc)) of a GPW family (no amplitude).
inline TaylorMatrix intermediate_matrix(const std::vector<AmplitudeGPW>& family, int n) {
  std::vector<std::vector<cplx>> cols;
  for (const auto& g : family) cols.push_back(plane_wave_taylor_column(g.center, g.direction, n));
  return build_matrix(cols, n);
}

inline Eigen::VectorXd singular_values(const TaylorMatrix& m) {
  if (m.entries.size() == 0) return {};
  Eigen::JacobiSVD<CMatrix> svd(m.entries);
  return svd.singularValues();
}

/// Count of singular values above tol * largest.
inline int numerical_rank(const TaylorMatrix& m, double tol = kDefaultRankTolerance) {
  if (!(tol > 0)) throw Error("rank tolerance must be positive");
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

/// Largest over smallest nonzero singular value; infinity for a zero matrix.
inline double condition_number(const TaylorMatrix& m) {
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return std::numeric_limits<double>::infinity();
  double smallest = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 0.0) smallest = sv(i);
  return sv(0) / smallest;
}

struct UnitriangularCheck {
  double relative_residual = 0.0;
  CMatrix L;
  /// Rows whose leading block of MC was rank deficient during the regression.
  int rank_deficient_rows = 0;
};

/// Fits a lower-unitriangular L with MG ~ L MC, row by row: row i of MG minus
/// row i of MC is regressed on rows 0..i-1 of MC.
inline UnitriangularCheck unitriangular_relation_check(const TaylorMatrix& MG, const TaylorMatrix& MC) {
  if (MG.rows() != MC.rows() || MG.cols() != MC.cols()) throw Error("matrix shapes differ");
  const Eigen::Index rows = MG.entries.rows();
  UnitriangularCheck out;
  out.L = CMatrix::Identity(rows, rows);
  CMatrix residual = MG.entries - MC.entries;
  residual.row(0) = MG.entries.row(0) - MC.entries.row(0);
  for (Eigen::Index i = 1; i < rows; ++i) {
    const CMatrix basis = MC.entries.topRows(i).transpose();  // p x i
    const CVector target = (MG.entries.row(i) - MC.entries.row(i)).transpose();
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(basis);
    cod.setThreshold(kDefaultRankTolerance);
    if (cod.rank() < i) ++out.rank_deficient_rows;
    const CVector coef = cod.solve(target);
    out.L.row(i).head(i) = coef.transpose();
    residual.row(i) = (target - basis * coef).transpose();
  }
  const double scale = MG.entries.norm();
  out.relative_residual = scale > 0 ? residual.norm() / scale : residual.norm();
  return out;
}

struct MatchResult {
  CVector coefficients;
  double relative_residual = 0.0;
  int rank = 0;
  bool ok = true;
};

/// Least-squares X minimizing |MG X - U| by column-pivoted QR; `ok` is false
/// when the relative residual exceeds `tol`.
inline MatchResult match_solution(const TaylorMatrix& MG, const std::vector<cplx>& U, double tol = 1e-8) {
  if (static_cast<Eigen::Index>(U.size()) != MG.entries.rows()) throw Error("right-hand side length mismatch");
  const CVector u = Eigen::Map<const CVector>(U.data(), static_cast<Eigen::Index>(U.size()));
  Eigen::ColPivHouseholderQR<CMatrix> qr(MG.entries);
  MatchResult r;
  r.coefficients = qr.solve(u);
  r.rank = static_cast<int>(qr.rank());
  const double unorm = u.norm();
  const double res = (MG.entries * r.coefficients - u).norm();
  r.relative_residual = unorm > 0 ? res / unorm : res;
  r.ok = r.relative_residual <= tol;
  return r;
}

/// Like match_solution but throws with diagnostics when the residual exceeds tol.
inline MatchResult match_solution_or_throw(const TaylorMatrix& MG, const std::vector<cplx>& U, double tol = 1e-8) {
  MatchResult r = match_solution(MG, U, tol);
  if (!r.ok)
    throw Error("matching failed: U outside range or ill-conditioning (relative residual " +
                std::to_string(r.relative_residual) + ", rank " + std::to_string(r.rank) + ")");
  return r;
}

}  // namespace gpw
