#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "frd/error.hpp"
#include "frd/field_sampler.hpp"
#include "frd/oracle.hpp"

using namespace frd;
using namespace frd::sampling;

namespace {

const TorusGeometry g2(2, 3, 2, 108);

const FracDecomposition& dec2() {
  static const ChebExactStrategy st(g2);
  static const auto dec = decompose_fractional({1.0, 1.0}, g2, st, {});
  return dec;
}

}  // namespace

TEST(Philox, KnownAnswers) {
  // reference vectors of the Philox4x32-10 block function
  auto a = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(a, (std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  auto b = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(b, (std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  auto c = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(c, (std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(WhiteNoise, StandardNormalMoments) {
  std::vector<double> v(200001);
  white_noise(1, 0, 0, v);
  double m = 0, m2 = 0, m4 = 0;
  for (double x : v) {
    m += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  const double n = static_cast<double>(v.size());
  EXPECT_NEAR(m / n, 0.0, 5 * std::sqrt(1.0 / n));
  EXPECT_NEAR(m2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4 / n, 3.0, 5 * std::sqrt(96.0 / n));
}

TEST(WhiteNoise, StreamsAreDistinctAndReproducible) {
  std::vector<double> a(64), b(64), c(64);
  white_noise(5, 0, 3, a);
  white_noise(5, 0, 3, b);
  white_noise(5, 1, 3, c);
  EXPECT_EQ(std::memcmp(a.data(), b.data(), 64 * sizeof(double)), 0);
  EXPECT_NE(a, c);
}

TEST(Sampler, RefusesIndefiniteCovariance) {
  TorusGeometry g(2, 3, 0, 12);
  auto k = oracle::green_laplace(1.0, g).scaled(-1.0);
  EXPECT_THROW(sqrt_multiplier(k), ContractViolation);
  EXPECT_THROW(sample_scale(k, 1, 2), ContractViolation);
  EXPECT_THROW(sample_scale(oracle::green_laplace(1.0, g), 1, 0), DomainError);
}

TEST(Sampler, ScaleCovarianceMatchesKernel) {
  TorusGeometry g(2, 3, 0, 12);
  auto k = oracle::green_fractional({1.0, 1.0}, g);
  auto samples = sample_scale(k, 11, 3000);
  std::vector<std::vector<int>> offsets{{0, 0}, {1, 0}, {2, 3}};
  auto est = empirical_covariance(samples, offsets);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double want = k.at(offsets[i]);
    EXPECT_LE(std::abs(est[i].estimate - want), 4 * est[i].std_error) << i;
    EXPECT_FALSE(est[i].degenerate);
  }
}

TEST(Sampler, DeterministicAcrossWorkerCounts) {
  ::setenv("FRD_WORKERS", "1", 1);
  auto a = sample_total(dec2(), 9, 5);
  ::setenv("FRD_WORKERS", "3", 1);
  auto b = sample_total(dec2(), 9, 5);
  ::unsetenv("FRD_WORKERS");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = a[i].field.values(), y = b[i].field.values();
    EXPECT_EQ(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)), 0);
  }
  auto c = sample_total(dec2(), 10, 1);
  EXPECT_NE(c[0].field[0], a[0].field[0]);
}

TEST(Sampler, MasslessTotalRefused) {
  static const ChebExactStrategy st(g2);
  auto dec = decompose_fractional({1.0, 0.0}, g2, st, {});
  EXPECT_THROW(sample_total(dec, 1, 2), DomainError);
}

TEST(Sampler, SummaryStatistics) {
  const double c[] = {1.0, 2.0, 3.0, 4.0};
  auto e = summarize_products(c, {0});
  EXPECT_DOUBLE_EQ(e.estimate, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  const double flat[] = {2.0, 2.0};
  EXPECT_TRUE(summarize_products(flat, {0}).degenerate);
  const double one[] = {2.0};
  EXPECT_THROW(summarize_products(one, {0}), DomainError);
}

TEST(Sampler, CheckReportOnSmallRun) {
  auto rep = check_sampler(dec2(), 42, 400);
  EXPECT_EQ(rep.n, 400u);
  // totals at 0, 1, 3, 9; per-scale beyond range for j = 0, 1, 2; two cross pairs
  EXPECT_EQ(rep.checks.size(), 9u);
  for (const auto& c : rep.checks) EXPECT_FALSE(c.estimate.degenerate) << c.quantity;
}
