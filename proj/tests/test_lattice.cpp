#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "frd/error.hpp"
#include "frd/fft.hpp"
#include "frd/kernel_io.hpp"
#include "frd/lattice.hpp"
#include "frd/oracle.hpp"

using namespace frd;

namespace {

std::vector<double> ramp(const TorusGeometry& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * i) + 0.1 * (i % 7);
  return v;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("frd_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Geometry, HalfPeriodGuard) {
  EXPECT_THROW(TorusGeometry(2, 3, 3, 323), DomainError);
  EXPECT_NO_THROW(TorusGeometry(2, 3, 3, 324));
  EXPECT_THROW(TorusGeometry(0, 3, 0, 12), DomainError);
  EXPECT_THROW(TorusGeometry(2, 1, 0, 12), DomainError);
}

TEST(Geometry, WarnsForBaseNotPowerOfThree) {
  EXPECT_TRUE(TorusGeometry(2, 3, 0, 12).warnings().empty());
  EXPECT_TRUE(TorusGeometry(2, 9, 0, 36).warnings().empty());
  EXPECT_EQ(TorusGeometry(2, 4, 0, 16).warnings().size(), 1u);
}

TEST(Geometry, IndexingAndDistance) {
  TorusGeometry g(2, 3, 0, 12);
  std::vector<int> off{-2, 5};
  const auto i = g.index_of(off);
  std::vector<int> back(2);
  g.offset_of(i, back);
  EXPECT_EQ(back, off);
  EXPECT_NEAR(g.distance(i), std::sqrt(29.0), 1e-15);
  std::vector<int> neg{2, -5};
  EXPECT_EQ(g.reflected_index(i), g.index_of(neg));
  EXPECT_DOUBLE_EQ(g.declared_range(2), 27.0);
  EXPECT_NEAR(g.min_positive_symbol(), 2.0 - 2.0 * std::cos(2 * std::numbers::pi / 12), 1e-15);
}

TEST(Symbol, Values) {
  std::vector<double> k{std::numbers::pi, 0.0};
  EXPECT_DOUBLE_EQ(symbol(k), 4.0);
}

TEST(Kernel, MultiplierRoundTrip) {
  TorusGeometry g(2, 3, 0, 12);
  auto k = Kernel::symmetrized(GridFunction(g, ramp(g)));
  auto back = from_multiplier(k.multiplier());
  EXPECT_LE(relative_sup_distance(back.values(), k.values()), 1e-14);
  auto d = Kernel::delta(g);
  for (double v : d.multiplier().values()) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Kernel, FromEvenRejectsOddPart) {
  TorusGeometry g(1, 3, 0, 12);
  std::vector<double> v(12, 0.0);
  v[1] = 1.0;
  EXPECT_THROW(Kernel::from_even(g, v), DomainError);
  v[11] = 1.0;
  EXPECT_NO_THROW(Kernel::from_even(g, v));
}

TEST(Kernel, Arithmetic) {
  TorusGeometry g(2, 3, 0, 12);
  auto a = Kernel::symmetrized(GridFunction(g, ramp(g)));
  auto b = a.scaled(2.0) - a;
  EXPECT_LE(relative_sup_distance(b.values(), a.values()), 1e-15);
  EXPECT_THROW(a + Kernel::zero(TorusGeometry(2, 3, 0, 24)), DomainError);
}

TEST(Oracle, GreenFractionalTorusValues) {
  // numpy inverse FFT of 1 / (lambda^{a/2} + m^2), d = 2, M = 12
  TorusGeometry g(2, 3, 0, 12);
  struct Case {
    double a, m2, g00, g10, g32;
  };
  for (auto c : {Case{1.0, 1.0, 0.36163515501834215, 0.04238951305458599, 0.003153941246216076},
                 Case{0.5, 0.25, 0.654424760473469, 0.06940801068507717, 0.022085433229236274},
                 Case{1.5, 4.0, 0.15281132679037018, 0.013564388458993612, 0.00017076095156848883}}) {
    auto k = oracle::green_fractional({c.a, c.m2}, g);
    std::vector<int> o0{0, 0}, o1{1, 0}, o2{3, 2};
    EXPECT_NEAR(k.at(o0), c.g00, 1e-14);
    EXPECT_NEAR(k.at(o1), c.g10, 1e-14);
    EXPECT_NEAR(k.at(o2), c.g32, 1e-14);
  }
  auto gl = oracle::green_laplace(0.5, g);
  std::vector<int> o0{0, 0}, o21{2, 1};
  EXPECT_NEAR(gl.at(o0), 0.31630099282210034, 1e-14);
  EXPECT_NEAR(gl.at(o21), 0.029011990280782364, 1e-14);
}

TEST(Oracle, ZeroModeGuards) {
  TorusGeometry g(2, 3, 0, 12);
  EXPECT_THROW(oracle::green_laplace(0.0, g), DomainError);
  EXPECT_NO_THROW(oracle::green_laplace(0.0, g, true));
  EXPECT_THROW(oracle::green_fractional({1.0, 0.0}, g), DomainError);
  EXPECT_THROW(oracle::green_fractional({1.0, 1.0}, TorusGeometry(1, 3, 0, 12)), DomainError);
}

TEST(Oracle, PoissonSummationOfTheResolvent) {
  // 1D massive resolvent on Z is r^{|x|} / (2 sinh(mu)) with cosh(mu) = 1 + s/2;
  // on the torus it is the periodized sum of that.
  const double s = 0.7;
  TorusGeometry g(1, 3, 0, 24);
  auto k = oracle::green_laplace(s, g);
  const double mu = std::acosh(1.0 + s / 2.0);
  for (int x = 0; x < 12; ++x) {
    double want = 0.0;
    for (int n = -60; n <= 60; ++n) want += std::exp(-mu * std::abs(x + 24 * n)) / (2.0 * std::sinh(mu));
    std::vector<int> o{x};
    EXPECT_NEAR(k.at(o), want, 1e-14) << x;
  }
}

TEST(Oracle, MasslessRepresentation) {
  TorusGeometry g(2, 3, 1, 36);
  for (double a : {0.5, 1.0, 1.5}) {
    auto r = oracle::m0_representation_check(a, g, {});
    EXPECT_TRUE(r.pass) << a << " residual " << r.residual;
  }
}

TEST(Derivative, ForwardDifferences) {
  TorusGeometry g(1, 3, 0, 12);
  std::vector<double> v(12);
  for (int i = 0; i < 12; ++i) v[i] = i * i;
  GridFunction f(g, v);
  auto d1 = forward_derivative(f, 0, 1, 1.0);
  EXPECT_DOUBLE_EQ(d1[3], 7.0);
  auto d2 = forward_derivative(f, 0, 2, 1.0);
  EXPECT_DOUBLE_EQ(d2[3], 2.0);
  EXPECT_THROW(forward_derivative(f, 0, 1, 0.5), DomainError);
  EXPECT_THROW(forward_derivative(f, 1, 1, 1.0), DomainError);
}

TEST(Support, RadiusAndZero) {
  TorusGeometry g(2, 3, 0, 12);
  std::vector<double> v(g.size(), 0.0);
  std::vector<int> o{3, 4};
  v[g.index_of(o)] = 1e-3;
  v[0] = 1.0;
  EXPECT_NEAR(support_radius(GridFunction(g, v), 0.0).radius, 5.0, 1e-15);
  EXPECT_NEAR(support_radius(GridFunction(g, v), 1e-2).radius, 0.0, 1e-15);
  EXPECT_TRUE(support_radius(GridFunction(g, std::vector<double>(g.size(), 0.0)), 0.0).all_zero);
}

TEST(Fft, HalfIndexMatchesFullTransform) {
  TorusGeometry g(2, 3, 0, 12);
  fft::RealTransform t(g);
  auto v = ramp(g);
  std::copy(v.begin(), v.end(), t.real().begin());
  t.forward();
  std::vector<std::complex<double>> half(t.half().begin(), t.half().end());
  // direct DFT at one mode with n = (5, 9)
  std::complex<double> direct = 0.0;
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      direct += v[a * 12 + b] * std::polar(1.0, -2 * std::numbers::pi * (5.0 * a + 9.0 * b) / 12.0);
  auto [h, conj] = t.half_index(5 * 12 + 9);
  const auto got = conj ? std::conj(half[h]) : half[h];
  EXPECT_NEAR(std::abs(got - direct), 0.0, 1e-12);
}

TEST(Io, RoundTripAndCorruption) {
  const auto dir = scratch("io");
  TorusGeometry g = TorusGeometry(2, 3, 0, 12).with_spacing(Spacing::inverse_power(3, 2));
  GridFunction f(g, ramp(g));
  io::write_grid(dir / "k", f, "test");
  auto back = io::read_grid(dir / "k");
  EXPECT_EQ(back.role, "test");
  EXPECT_TRUE(back.grid.geometry() == g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.grid[i], f[i]);

  std::filesystem::resize_file(io::bin_path(dir / "k"), 16);
  EXPECT_THROW(io::read_grid(dir / "k"), IoError);
  std::ofstream(io::sidecar_path(dir / "k")) << "{not json";
  EXPECT_THROW(io::read_grid(dir / "k"), IoError);
  EXPECT_THROW(io::read_grid(dir / "missing"), IoError);
}

TEST(Io, RadialProfile) {
  const auto dir = scratch("radial");
  TorusGeometry g(2, 3, 0, 12);
  io::write_radial_profile(dir / "r.csv", oracle::green_laplace(1.0, g).grid());
  std::ifstream in(dir / "r.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "distance,value,min,max");
  EXPECT_EQ(first.substr(0, 2), "0,");
}
