#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "frd/chebyshev.hpp"
#include "frd/error.hpp"
#include "frd/quadrature.hpp"
#include "frd/window.hpp"

using namespace frd;

namespace {

// composite Gauss-Legendre on [a, b] with n panels
template <class F>
double integrate(F f, double a, double b, int panels = 400) {
  auto r = quad::gauss_legendre(10);
  double acc = 0.0, h = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += 0.5 * h * r.w[i] * f(a + h * (p + 0.5 + 0.5 * r.x[i]));
  return acc;
}

}  // namespace

TEST(Window, ExtendedPrecisionValues) {
  BSplineWindow w(6);
  EXPECT_NEAR(w.omega(0.0), 1.0, 1e-15);
  EXPECT_NEAR(w.omega(0.3), 0.47239545454545462, 1e-14);
  EXPECT_NEAR(w.omega(-0.3), w.omega(0.3), 1e-15);
  EXPECT_EQ(w.omega(1.0), 0.0);
  EXPECT_NEAR(w.G(0.5), 0.029984620458045221, 1e-14);
  EXPECT_EQ(w.G(1.2), 0.0);
  EXPECT_NEAR(w.C(), 10.202484567437334, 1e-11);
  EXPECT_NEAR(BSplineWindow(4).C(), 12.0 * std::log(2.0), 1e-12);
}

TEST(Window, RejectsOddOrder) { EXPECT_THROW(BSplineWindow(5), DomainError); }

TEST(Window, TransformNonnegativeAndConstantByQuadrature) {
  BSplineWindow w(6);
  for (int i = 0; i <= 400; ++i) EXPECT_GE(w.omega_hat(0.25 * i), 0.0);
  // omega_hat(0) = int omega
  EXPECT_NEAR(w.omega_hat(0.0), integrate([&](double u) { return w.omega(u); }, -1.0, 1.0), 1e-13);
  // C = int_0^inf u omega_hat(u) du, second route; the tail decays like u^{-5}
  const double c = integrate([&](double u) { return u * w.omega_hat(u); }, 0.0, 2000.0, 20000);
  EXPECT_NEAR(c, w.C(), 2e-6 * w.C());
}

TEST(Window, BandCoefficientsAgainstDirectIntegration) {
  BSplineWindow w(6);
  auto g = w.band_coefficients(1.0, 3.0);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_NEAR(g[0], 2.0, 1e-15);
  EXPECT_NEAR(g[1], 0.28512135264496925, 1e-14);
  EXPECT_NEAR(g[2], 0.0033301105630386635, 1e-14);
  auto h = w.band_coefficients(3.0, 9.0);
  for (std::size_t n = 1; n < h.size(); ++n) {
    const double direct = integrate([&](double t) { return w.omega(n / t); }, 3.0, 9.0, 2000);
    EXPECT_NEAR(h[n], direct, 1e-12) << n;
  }
  auto first = w.band_coefficients(0.0, 3.0);
  EXPECT_NEAR(first[0], 3.0, 1e-15);
}

TEST(Chebyshev, InterpolationIsExactForPolynomials) {
  auto s = ChebyshevSeries::interpolate([](double x) { return 3 * x * x * x - x + 0.5; }, 3);
  ASSERT_EQ(s.degree(), 3u);
  EXPECT_NEAR(s.coefficients()[3], 0.75, 1e-14);
  EXPECT_NEAR(s(0.3), 3 * 0.027 - 0.3 + 0.5, 1e-14);
  auto nodes = ChebyshevSeries::nodes(4);
  EXPECT_NEAR(nodes[0], std::cos(std::numbers::pi / 8), 1e-15);
}

TEST(Chebyshev, RealizationMatchesMultiplierAndHasExactSupport) {
  TorusGeometry g(2, 3, 1, 36);
  auto s = ChebyshevSeries::interpolate([](double x) { return std::exp(2 * x); }, 8);
  auto k = realize_on_lattice(s, g);
  auto m = chebyshev_multiplier(s, g);
  const auto& fft_route = k.multiplier();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(fft_route[i], m[i], 1e-12);
  // P^n reaches |x|_1 <= n only
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<int> o(2);
    g.offset_of(i, o);
    if (std::abs(o[0]) + std::abs(o[1]) > 8) {
      EXPECT_EQ(k[i], 0.0);
    }
  }
}

TEST(Chebyshev, RejectsDegreeBeyondTorus) {
  TorusGeometry g(1, 3, 0, 12);
  auto s = ChebyshevSeries::interpolate([](double x) { return x; }, 6);
  EXPECT_THROW(realize_on_lattice(s, g), DomainError);
}
