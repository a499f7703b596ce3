#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frd/error.hpp"
#include "frd/quadrature.hpp"
#include "frd/spectral_weight.hpp"

using namespace frd;

namespace {
constexpr double pi = std::numbers::pi;
const QuadratureSpec q{};
}  // namespace

TEST(SpectralParams, RejectsOutsideDomain) {
  EXPECT_THROW(SpectralParams(0.0, 1.0), DomainError);
  EXPECT_THROW(SpectralParams(2.0, 1.0), DomainError);
  EXPECT_THROW(SpectralParams(2.5, 1.0), DomainError);
  EXPECT_THROW(SpectralParams(1.0, -0.1), DomainError);
  EXPECT_THROW(SpectralParams(1.0, std::nan("")), DomainError);
  EXPECT_NO_THROW(SpectralParams(1.0, 0.0));
  EXPECT_DOUBLE_EQ(SpectralParams(0.5, 1.0).field_dimension(2), 0.75);
}

TEST(QuadratureSpec, Validates) {
  EXPECT_THROW((QuadratureSpec{0.0, 400}.validate()), DomainError);
  EXPECT_THROW((QuadratureSpec{1e-8, 20}.validate()), DomainError);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  auto r = quad::gauss_legendre(10);
  double s = 0.0, s18 = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    s += r.w[i];
    s18 += r.w[i] * std::pow(r.x[i], 18);
  }
  EXPECT_NEAR(s, 2.0, 1e-15);
  EXPECT_NEAR(s18, 2.0 / 19.0, 1e-15);
}

TEST(Rho, AlphaOneClosedForm) {
  for (double m2 : {0.0, 0.1, 1.0, 10.0})
    for (double s : {1e-4, 0.3, 1.0, 7.0, 1e4}) {
      const double want = std::sqrt(s) / (pi * (s + m2 * m2));
      EXPECT_NEAR(rho(s, {1.0, m2}), want, 1e-15 * want) << s << " " << m2;
    }
}

TEST(Rho, MatchesComplexContinuation) {
  // -(1/pi) Im 1/(s^{a/2} e^{i pi a/2} + m^2), evaluated in extended precision
  EXPECT_NEAR(rho(0.7, {0.5, 1.0}), 0.065770866412335115, 1e-15);
  EXPECT_NEAR(rho(3.0, {1.5, 0.1}), 0.10505575546619508, 1e-15);
  EXPECT_NEAR(rho(2.0, {1.0, 0.0}), 0.22507907903927652, 1e-15);
  EXPECT_NEAR(rho(1e-3, {1.5, 4.0}), 7.9264477373768464e-5, 1e-18);
}

TEST(Rho, NonnegativeAndBounded) {
  for (double a : {0.1, 0.5, 1.0, 1.5, 1.9})
    for (double m2 : {0.0, 0.1, 1.0, 10.0})
      for (int i = 0; i <= 200; ++i) {
        const double s = std::pow(10.0, -8.0 + 16.0 * i / 200.0);
        const SpectralParams p(a, m2);
        const double r = rho(s, p);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, rho_bound(s, p) * (1 + 1e-14)) << a << " " << m2 << " " << s;
      }
}

TEST(Rho, AtZeroAndNegative) {
  EXPECT_THROW(rho(0.0, {1.0, 1.0}), DomainError);
  EXPECT_THROW(rho(-1.0, {1.0, 1.0}), DomainError);
}

TEST(Constants, CAlpha) {
  EXPECT_NEAR(c_alpha({1.0, 1.0}), 1.0 / pi, 1e-15);
  // sin h / (pi (1 - |cos h|)), h = pi a / 2
  EXPECT_NEAR(c_alpha({0.5, 1.0}), std::sin(pi / 4) / (pi * (1 - std::cos(pi / 4))), 1e-15);
  EXPECT_NEAR(c_alpha({1.5, 1.0}), c_alpha({0.5, 1.0}), 1e-15);
}

TEST(FAlpha, ClosedForm) {
  EXPECT_NEAR(f_alpha(4.0, {1.0, 1.0}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(f_alpha(0.25, {1.0, 0.5}), 1.0, 1e-15);
  EXPECT_THROW(f_alpha(-1.0, {1.0, 1.0}), DomainError);
}

TEST(KatoYosida, GridWithinTolerance) {
  for (double a : {0.5, 1.0, 1.5})
    for (double m2 : {0.0, 0.1, 1.0, 10.0})
      for (int i = 0; i < 13; ++i) {
        const double t = std::pow(10.0, -3.0 + 6.0 * i / 12.0);
        const SpectralParams p(a, m2);
        const double f = f_alpha(t, p);
        EXPECT_LE(std::abs(kato_yosida(t, p, q) - f) / f, 2e-8) << a << " " << m2 << " " << t;
      }
}

TEST(KatoYosida, BudgetExhaustionIsReported) {
  try {
    kato_yosida(1.0, {0.5, 1.0}, {1e-15, 200});
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.achieved_rel_error(), 1e-15);
    EXPECT_LE(e.nodes_used(), 200);
  }
}

TEST(Scaling, ExactIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.05, 1.95), ulog(-4.0, 4.0), um(-3.0, 1.0);
  std::uniform_int_distribution<int> uj(0, 6);
  for (int i = 0; i < 500; ++i) {
    const SpectralParams p(ua(rng), std::pow(10.0, um(rng)));
    const double s = std::pow(10.0, ulog(rng));
    const int j = uj(rng);
    const double lhs = rho_rescaled(s, j, p, 3);
    const double rhs = rho(s, p.with_mass(std::pow(3.0, j * p.alpha()) * p.m2()));
    EXPECT_LE(std::abs(lhs - rhs), 1e-13 * std::abs(rhs));
  }
}

TEST(BoundIntegrals, AlphaOneAnchors) {
  EXPECT_NEAR(F_integral({1.0, 0.0}, q), pi / 2, 1e-8);
  EXPECT_NEAR(F0_integral({1.0, 0.0}, q), pi, 1e-8);
}

TEST(BoundIntegrals, ExtendedPrecisionValues) {
  EXPECT_NEAR(F_integral({0.5, 1.0}, q), 0.46007559225530506, 1e-8);
  EXPECT_NEAR(F0_integral({0.5, 1.0}, q), pi, 1e-8);
  EXPECT_NEAR(F_integral({1.5, 1.0}, q), 0.33302922556931743, 1e-8);
  EXPECT_NEAR(F0_integral({1.5, 1.0}, q), pi / 3, 1e-8);
  EXPECT_NEAR(F_integral({1.0, 0.25}, q), 1.0053096491487338, 1e-8);
  EXPECT_NEAR(F0_integral({1.0, 0.25}, q), 2.5132741228718346, 1e-8);
}

TEST(ResolventNodes, SharedAcrossProbes) {
  const SpectralParams p(0.5, 0.25);
  auto rn = resolvent_nodes(p, 1e-3, 8.0, q);
  EXPECT_LE(rn.worst_rel_error, q.rel_tol);
  for (double lam : {0.0, 1e-3, 0.01, 0.5, 3.0, 8.0}) {
    const double want = 1.0 / (std::pow(lam, 0.25) + 0.25);
    EXPECT_LE(std::abs(rn.resolvent(lam) - want) / want, 2e-8) << lam;
  }
}
