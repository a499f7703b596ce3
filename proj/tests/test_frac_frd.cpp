#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "frd/error.hpp"
#include "frd/frac_frd.hpp"
#include "frd/oracle.hpp"

using namespace frd;

namespace {

const TorusGeometry g2(2, 3, 2, 108);
const TorusGeometry g3(2, 3, 3, 324);

const ChebExactStrategy& cheb2() {
  static const ChebExactStrategy st(g2);
  return st;
}
const ChebExactStrategy& cheb3() {
  static const ChebExactStrategy st(g3);
  return st;
}

double contract_value(const FracDecomposition& dec, const std::string& inv) {
  for (const auto& c : dec.contract)
    if (c.invariant == inv) return c.value;
  throw std::runtime_error("missing " + inv);
}

}  // namespace

TEST(FracDecomposition, SumMatchesOracle) {
  for (double a : {0.5, 1.0, 1.5})
    for (double m2 : {0.25, 1.0, 4.0}) {
      auto dec = decompose_fractional({a, m2}, g3, cheb3(), {});
      for (const auto& c : dec.contract) EXPECT_TRUE(c.pass) << a << " " << m2 << " " << c.invariant << " " << c.subject;
      EXPECT_LE(contract_value(dec, "sum"), 1e-6);
      for (int j = 0; j <= 3; ++j) EXPECT_LT(support_radius(dec.scales[j].grid(), 0.0).radius, g3.declared_range(j));
    }
}

TEST(FracDecomposition, MasslessPerModeIdentity) {
  for (double a : {0.5, 1.0, 1.5}) {
    auto dec = decompose_fractional({a, 0.0}, g3, cheb3(), {});
    EXPECT_LE(contract_value(dec, "mode_sum"), 1e-6) << a;
    EXPECT_NEAR(dec.remainder.multiplier()[0], 0.0, 1e-12);
  }
}

TEST(FracDecomposition, ScaleMultiplierBySecondQuadrature) {
  // the scale-j multiplier at a mode, against its own s-integral on a separate node set
  const SpectralParams p(0.5, 1.0);
  auto dec = decompose_fractional(p, g2, cheb2(), {});
  for (int j : {0, 2})
    for (std::size_t i : {std::size_t{1}, std::size_t{108 * 7 + 3}, std::size_t{54 * 108 + 54}}) {
      std::vector<int> o(2);
      g2.offset_of(i, o);
      std::vector<double> k{2 * std::numbers::pi * o[0] / 108.0, 2 * std::numbers::pi * o[1] / 108.0};
      const double lam = symbol(k);
      std::vector<std::function<double(double)>> probe{
          [&](double s) { return rho(s, p) * cheb2().profile(j, s, lam); }};
      const double feats[] = {1.0, lam + 1e-3};
      auto ns = quad::adaptive_half_line(probe, quad::map_for_features(feats, 1.25, 0.25), 1e-11, 4000);
      EXPECT_NEAR(dec.scales[j].multiplier()[i], ns.integrals[0], 1e-8 * ns.integrals[0]) << j << " " << i;
    }
}

TEST(FracDecomposition, NegativeWeightBreaksPsd) {
  FracOptions opt;
  opt.weight_override = [](double s) { return s > 1.0 ? -1.0 : 1.0; };
  // a negative weight is harmless to the base audit but breaks psd of the scales
  auto dec = decompose_fractional({1.0, 1.0}, g2, cheb2(), {}, [&] {
    FracOptions o = opt;
    o.enforce_contract = false;
    return o;
  }());
  bool some_psd_fail = false;
  for (const auto& c : dec.contract) some_psd_fail = some_psd_fail || (c.invariant == "psd" && !c.pass);
  EXPECT_TRUE(some_psd_fail);
  EXPECT_THROW(decompose_fractional({1.0, 1.0}, g2, cheb2(), {}, opt), ContractViolation);
}

TEST(FracDecomposition, RejectsBadInputs) {
  EXPECT_THROW(decompose_fractional({1.0, 1.0}, TorusGeometry(1, 3, 1, 36), ChebExactStrategy(TorusGeometry(1, 3, 1, 36)), {}),
               DomainError);
  EXPECT_THROW(decompose_fractional({1.0, 1.0}, g3, cheb2(), {}), DomainError);
  EXPECT_THROW(decompose_fractional({0.5, 1.0}, g2, cheb2(), {1e-15, 40}), QuadratureError);
}

TEST(FracDecomposition, PartialBuild) {
  FracOptions opt;
  opt.only_scales = std::vector<int>{1};
  auto dec = decompose_fractional({1.0, 1.0}, g2, cheb2(), {}, opt);
  EXPECT_TRUE(dec.built[1]);
  EXPECT_FALSE(dec.built[0]);
  opt.only_scales = std::vector<int>{5};
  EXPECT_THROW(decompose_fractional({1.0, 1.0}, g2, cheb2(), {}, opt), DomainError);
}

TEST(Views, RescaleRoundTrip) {
  auto dec = decompose_fractional({1.0, 1.0}, g2, cheb2(), {});
  auto v = rescaled_view(dec, 2);
  EXPECT_EQ(v.geometry().spacing(), Spacing::inverse_power(3, 2));
  EXPECT_NEAR(v.sup_norm(), dec.scales[2].sup_norm() * std::pow(3.0, 2 * 2 * 0.5), 1e-15 * v.sup_norm());
  auto back = unrescale(v, 2, 1.0);
  EXPECT_LE(relative_sup_distance(back.values(), dec.scales[2].values()), 1e-15);
  EXPECT_THROW(unrescale(v, 1, 1.0), DomainError);
  EXPECT_THROW(rescaled_view(dec, 3), DomainError);
}

TEST(CoarseGrain, RegroupsAndPreservesSum) {
  auto dec = decompose_fractional({1.0, 1.0}, g3, cheb3(), {});
  auto cg = coarse_grain(dec, 2);
  EXPECT_EQ(cg.depth(), 1);
  EXPECT_EQ(cg.geometry.base(), 9);
  for (const auto& c : cg.contract) EXPECT_TRUE(c.pass) << c.invariant << " " << c.subject;
  auto cg3 = coarse_grain(dec, 3);
  EXPECT_EQ(cg3.depth(), 0);  // scale 3 folds into the remainder
  EXPECT_THROW(coarse_grain(dec, 5), DomainError);
  EXPECT_THROW(coarse_grain(dec, 0), DomainError);
}

TEST(Verify, TheoremReportShape) {
  auto dec = decompose_fractional({1.0, 0.0}, g3, cheb3(), {});
  auto rep = verify_theorem(dec, 2);
  EXPECT_EQ(rep.rows.size(), 12u);
  EXPECT_NEAR(rep.expected_decay_rate.at(0), -1.0 * std::log(3.0), 1e-15);
  EXPECT_NEAR(rep.expected_decay_rate.at(2), -3.0 * std::log(3.0), 1e-15);
  EXPECT_THROW(verify_theorem(dec, 4), DomainError);
  const int rs[] = {1, 2};
  auto cr = verify_coarse_bound(dec, rs, 2);
  EXPECT_EQ(cr.entries.size(), 2u);
  EXPECT_NEAR(cr.geometric_factor, 1.5, 1e-15);
}

TEST(Persistence, RoundTripAndCorruption) {
  auto dir = std::filesystem::temp_directory_path() / "frd_test_frac_io";
  std::filesystem::remove_all(dir);
  auto dec = decompose_fractional({1.5, 4.0}, g2, cheb2(), {});
  write_decomposition(dir, dec);
  auto back = read_decomposition(dir);
  EXPECT_EQ(back.params.alpha(), 1.5);
  EXPECT_EQ(back.nodes.size(), dec.nodes.size());
  for (int j = 0; j <= 2; ++j) EXPECT_EQ(relative_sup_distance(back.scales[j].values(), dec.scales[j].values()), 0.0);
  EXPECT_EQ(back.contract.size(), dec.contract.size());

  std::filesystem::resize_file(dir / "scale_1.bin", 8);
  EXPECT_THROW(read_decomposition(dir), IoError);
  EXPECT_THROW(read_decomposition(dir / "nowhere"), IoError);
}
