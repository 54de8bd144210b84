#include <gtest/gtest.h>

#include <random>

#include "gpw/interpolation.hpp"
#include "gpw/test_cases.hpp"

using namespace gpw;

namespace {

const Point kOrigin{0.0, 0.0};

Point random_admissible_center(std::mt19937_64& rng, const TestCase& tc) {
  std::uniform_real_distribution<double> ux(tc.domain.xmin, tc.domain.xmax), uy(tc.domain.ymin, tc.domain.ymax);
  for (;;) {
    const Point c{ux(rng), uy(rng)};
    if (std::abs(tc.op.s.value_at(c)) >= 0.1) return c;
  }
}

int q_for(int n) { return std::max(n - 1, 1); }

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<cplx> jet_vector(const TaylorPoly2& t) { return {t.coeffs().begin(), t.coeffs().end()}; }

}  // namespace

TEST(TaylorColumn, ConstantAmplitudeIsPlaneWaveColumn) {
  const Direction d{cplx(0.3, 1.1), cplx(-0.4, 0.2)};
  const AmplitudeGPW g{kOrigin, d, 4, TaylorPoly2::constant(kOrigin, 5, 1.0)};
  const auto col = gpw_taylor_column(g, 5);
  ASSERT_EQ(col.size(), triangular_size(5));
  for (int ell = 0; ell <= 5; ++ell)
    for (int jx = 0; jx <= ell; ++jx) {
      const int jy = ell - jx;
      const cplx expect = std::pow(d.lambda10, jx) * std::pow(d.lambda01, jy) / (factorial(jx) * factorial(jy));
      EXPECT_LE(std::abs(col[MultiIndex2{jx, jy}.linear()] - expect), 1e-14);
    }
  const auto pw = plane_wave_taylor_column(kOrigin, d, 5);
  for (std::size_t k = 0; k < col.size(); ++k) EXPECT_LE(std::abs(col[k] - pw[k]), 1e-15);
}

TEST(TaylorColumn, LeadingRowsAndSecondOrderEntry) {
  const auto tc = find_test_case("cs");
  const Point c{0.3, -0.2};
  const auto g = construct_amplitude_gpw(tc.op, c, normalize_direction(tc.op, c, 1.0), 3);
  const auto col = gpw_taylor_column(g, 4);
  EXPECT_EQ(col[0], cplx(1.0));
  EXPECT_EQ(col[1], g.direction.lambda10);
  EXPECT_EQ(col[2], g.direction.lambda01);

  const Direction d{cplx(0, 1.5), cplx(0.2, 0)};
  TaylorPoly2 Q = TaylorPoly2::constant(kOrigin, 2, 1.0);
  Q(2, 0) = cplx(0.7, -0.1);
  const auto col2 = gpw_taylor_column(AmplitudeGPW{kOrigin, d, 1, Q}, 2);
  EXPECT_LE(std::abs(col2[MultiIndex2{2, 0}.linear()] - (d.lambda10 * d.lambda10 / 2.0 + Q(2, 0))), 1e-15);
}

TEST(TaylorColumn, OrderRangeAndRaggedInput) {
  const AmplitudeGPW g{kOrigin, Direction{cplx(0, 1), 0.0}, 2, TaylorPoly2::constant(kOrigin, 3, 1.0)};
  EXPECT_THROW(gpw_taylor_column(g, 4), Error);
  EXPECT_THROW(gpw_taylor_column(g, -1), Error);
  try {
    (void)build_matrix({std::vector<cplx>(3), std::vector<cplx>(6)}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "ragged column input");
  }
}

TEST(TaylorColumn, PhaseColumnMatchesExponentialJet) {
  const auto tc = find_test_case("A+");
  const Point c{0.5, -0.3};
  const auto g = construct_phase_gpw(tc.op, c, normalize_direction(tc.op, c, 0.2), 3);
  const auto col = gpw_taylor_column(g, 4);
  // Taylor coefficients of exp(P) by finite differences of order 0 and 1
  EXPECT_EQ(col[0], cplx(1.0));
  EXPECT_EQ(col[1], g.P(1, 0));
  const double h = 1e-5;
  const cplx fxx = (g.evaluate({c.x + h, c.y}) - 2.0 * g.evaluate(c) + g.evaluate({c.x - h, c.y})) / (h * h);
  EXPECT_LE(std::abs(col[MultiIndex2{2, 0}.linear()] - fxx / 2.0), 1e-4);
}

TEST(ClassicalMatrix, ShapeAndFirstRows) {
  const auto op = helmholtz_operator(CoefficientField::constant(-1.0), "neg");
  const auto m = classical_pw_matrix(op, kOrigin, 3, 1, 0.0);
  ASSERT_EQ(m.rows(), 3);
  ASSERT_EQ(m.cols(), 3);
  const auto angles = angle_set(3, 0.0);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(m.entries(0, k), cplx(1.0));
    EXPECT_LE(std::abs(m.entries(1, k) - std::cos(angles[k])), 1e-15);
    EXPECT_LE(std::abs(m.entries(2, k) - std::sin(angles[k])), 1e-15);
  }
  const auto tc = find_test_case("Jc");
  const auto big = classical_pw_matrix(tc.op, {2.0, 1.0}, 7, 3);
  EXPECT_EQ(big.rows(), 10);
  for (int k = 0; k < 7; ++k) EXPECT_EQ(big.entries(0, k), cplx(1.0));
}

TEST(ClassicalMatrix, EqualsGpwMatrixForConstantCoefficients) {
  const auto ey = find_test_case("ey");
  const Point c{0.2, 1.0};
  for (int n = 1; n <= 5; ++n) {
    const auto MG = family_matrix(gpw_family(ey.op, c, 2 * n + 1, q_for(n)), n);
    const auto MC = classical_pw_matrix(ey.op, c, 2 * n + 1, n);
    EXPECT_LE((MG.entries - MC.entries).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Rank, IdentityAndZero) {
  TaylorMatrix id{1, CMatrix::Identity(3, 3)};
  EXPECT_EQ(numerical_rank(id), 3);
  EXPECT_DOUBLE_EQ(condition_number(id), 1.0);
  TaylorMatrix zero{1, CMatrix::Zero(3, 3)};
  EXPECT_EQ(numerical_rank(zero), 0);
  EXPECT_TRUE(std::isinf(condition_number(zero)));
  EXPECT_THROW(numerical_rank(id, 0.0), Error);
}

TEST(Rank, ClassicalAndGpwRanksAre2nPlus1) {
  std::mt19937_64 rng(31);
  for (const auto& tc : builtin_test_cases()) {
    for (int trial = 0; trial < 3; ++trial) {
      const Point c = random_admissible_center(rng, tc);
      for (int n = 1; n <= 6; ++n) {
        const int p = 2 * n + 1;
        EXPECT_EQ(numerical_rank(classical_pw_matrix(tc.op, c, p, n)), p) << tc.label << " n=" << n;
        EXPECT_EQ(numerical_rank(family_matrix(gpw_family(tc.op, c, p, q_for(n)), n)), p) << tc.label << " n=" << n;
        EXPECT_EQ(numerical_rank(family_matrix(phase_gpw_family(tc.op, c, p, q_for(n)), n)), p) << tc.label;
      }
    }
  }
}

TEST(Rank, ExtraColumnsDoNotRaiseRank) {
  const auto tc = find_test_case("Ac");
  const Point c{-0.4, 0.9};
  for (int n = 1; n <= 5; ++n) {
    const int p = 2 * n + 5;
    EXPECT_EQ(numerical_rank(classical_pw_matrix(tc.op, c, p, n)), 2 * n + 1);
    EXPECT_EQ(numerical_rank(family_matrix(gpw_family(tc.op, c, p, q_for(n)), n)), 2 * n + 1);
  }
}

TEST(Unitriangular, IdenticalMatricesGiveIdentity) {
  const auto tc = find_test_case("ey");
  const auto MC = classical_pw_matrix(tc.op, {0.1, 0.5}, 7, 3);
  const auto check = unitriangular_relation_check(MC, MC);
  EXPECT_EQ(check.relative_residual, 0.0);
  EXPECT_LE((check.L - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Unitriangular, HelmholtzCasesSatisfyRelation) {
  std::mt19937_64 rng(8);
  for (const char* label : {"Ae", "Ac", "A+", "ey"}) {
    const auto tc = find_test_case(label);
    for (int trial = 0; trial < 3; ++trial) {
      const Point c = random_admissible_center(rng, tc);
      for (int n = 1; n <= 4; ++n) {
        const int p = 2 * n + 1;
        const auto MG = family_matrix(gpw_family(tc.op, c, p, q_for(n)), n);
        const auto MC = classical_pw_matrix(tc.op, c, p, n);
        EXPECT_LE(unitriangular_relation_check(MG, MC).relative_residual, 1e-8) << label << " n=" << n;
      }
    }
  }
}

TEST(Unitriangular, GeneralOperatorAgainstIntermediateFamily) {
  std::mt19937_64 rng(81);
  for (const char* label : {"cs", "Jc", "JJ"}) {
    const auto tc = find_test_case(label);
    const Point c = random_admissible_center(rng, tc);
    for (int n = 1; n <= 4; ++n) {
      const auto fam = gpw_family(tc.op, c, 2 * n + 1, q_for(n));
      const auto check = unitriangular_relation_check(family_matrix(fam, n), intermediate_matrix(fam, n));
      EXPECT_LE(check.relative_residual, 1e-8) << label << " n=" << n;
    }
  }
}

TEST(Unitriangular, ScrambledRowsNegativeControl) {
  const auto tc = find_test_case("Ae");
  const Point c{-0.5, 0.4};
  const int n = 3;
  auto MG = family_matrix(gpw_family(tc.op, c, 7, q_for(n)), n);
  const auto MC = classical_pw_matrix(tc.op, c, 7, n);
  // reversing rows breaks the ordered relation
  MG.entries = MG.entries.colwise().reverse().eval();
  EXPECT_GT(unitriangular_relation_check(MG, MC).relative_residual, 1e-2);
}

TEST(Match, TrivialRightHandSides) {
  const auto tc = find_test_case("Ac");
  const Point c{0.4, 0.3};
  const auto MG = family_matrix(gpw_family(tc.op, c, 5, 1), 2);
  std::vector<cplx> U(6);
  for (int r = 0; r < 6; ++r) U[r] = MG.entries(r, 0);
  const auto r1 = match_solution(MG, U);
  EXPECT_TRUE(r1.ok);
  EXPECT_LE(std::abs(r1.coefficients(0) - 1.0), 1e-12);
  for (int k = 1; k < 5; ++k) EXPECT_LE(std::abs(r1.coefficients(k)), 1e-12);
  const auto r0 = match_solution(MG, std::vector<cplx>(6));
  EXPECT_EQ(r0.coefficients.norm(), 0.0);
  EXPECT_THROW(match_solution(MG, std::vector<cplx>(5)), Error);
}

TEST(Match, OutsideRangeIsReported) {
  const auto tc = find_test_case("ey");
  const auto MG = family_matrix(gpw_family(tc.op, {0.0, 1.0}, 5, 1), 2);
  std::vector<cplx> U(6);
  U[MultiIndex2{2, 0}.linear()] = 1.0;  // x^2 is not a Helmholtz solution jet
  EXPECT_FALSE(match_solution(MG, U).ok);
  try {
    (void)match_solution_or_throw(MG, U);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("matching failed: U outside range or ill-conditioning"), std::string::npos);
  }
}

TEST(Match, PlaneWaveCaseReproducesSolution) {
  const auto ey = find_test_case("ey");
  const Point c{0.2, 1.0};
  const int n = 3;
  const auto fam = gpw_family(ey.op, c, 7, q_for(n));
  const auto MG = family_matrix(fam, n);
  const auto U = jet_vector(ey.exact_taylor(c, n));
  const auto r = match_solution(MG, U);
  EXPECT_LE(r.relative_residual, 1e-10);
  cplx ua = 0;
  for (std::size_t k = 0; k < fam.size(); ++k) ua += r.coefficients(static_cast<Eigen::Index>(k)) * evaluate(fam[k], c);
  EXPECT_LE(std::abs(ua - ey.exact_value(c)), 1e-12);
  // MG X reproduces U to the reported residual
  const CVector u = Eigen::Map<const CVector>(U.data(), static_cast<Eigen::Index>(U.size()));
  EXPECT_LE((MG.entries * r.coefficients - u).norm(), r.relative_residual * u.norm() * (1 + 1e-12) + 1e-300);
}

TEST(Match, RangeMembershipForAllCases) {
  std::mt19937_64 rng(64);
  for (const auto& tc : builtin_test_cases()) {
    for (int trial = 0; trial < 4; ++trial) {
      const Point c = random_admissible_center(rng, tc);
      for (int n = 1; n <= 5; ++n) {
        const auto MG = family_matrix(gpw_family(tc.op, c, 2 * n + 1, q_for(n)), n);
        const auto r = match_solution(MG, jet_vector(tc.exact_taylor(c, n)));
        EXPECT_LE(r.relative_residual, 1e-8) << tc.label << " n=" << n;
        const auto rp = match_solution(family_matrix(phase_gpw_family(tc.op, c, 2 * n + 1, q_for(n)), n),
                                       jet_vector(tc.exact_taylor(c, n)));
        EXPECT_LE(rp.relative_residual, 1e-8) << tc.label << " phase n=" << n;
      }
    }
  }
}
