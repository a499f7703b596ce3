#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "frd/base_frd.hpp"
#include "frd/error.hpp"
#include "frd/oracle.hpp"

using namespace frd;

namespace {

const TorusGeometry g3(2, 3, 3, 324);

const ChebExactStrategy& cheb() {
  static const ChebExactStrategy st(g3);
  return st;
}

const ContractResult& find(const std::vector<ContractResult>& cs, const std::string& inv, const std::string& who) {
  for (const auto& c : cs)
    if (c.invariant == inv && c.subject == who) return c;
  throw std::runtime_error("no contract entry " + inv + " / " + who);
}

}  // namespace

TEST(ChebExact, ProfilesSumToResolvent) {
  // sum of all band profiles plus the tail reproduces 1/(lambda + s); the
  // tail past t = L^{J+1} is what the remainder carries.
  for (double s : {0.1, 1.0, 10.0})
    for (double lam : {0.0, 0.5, 3.0, 8.0}) {
      double acc = 0.0;
      for (int j = 0; j <= 3; ++j) {
        const double v = cheb().profile(j, s, lam);
        EXPECT_GE(v, -1e-15 / (lam + s));
        acc += v;
      }
      EXPECT_LE(acc, 1.0 / (lam + s) * (1 + 1e-12));
    }
}

TEST(ChebExact, SeriesDegree) {
  EXPECT_EQ(*cheb().polynomial_degree(0), 2u);
  EXPECT_EQ(*cheb().polynomial_degree(2), 26u);
  EXPECT_EQ(cheb().scale_series(1, 1.0).degree(), 8u);
}

TEST(BaseDecomposition, ContractForAllMasses) {
  for (double s : {0.1, 1.0, 10.0, 100.0}) {
    auto dec = decompose_base(s, g3, cheb());
    for (const auto& c : dec.contract) EXPECT_TRUE(c.pass) << s << " " << c.invariant << " " << c.subject;
    EXPECT_LE(find(dec.contract, "sum", "all scales").value, 1e-10);
    for (int j = 0; j <= 3; ++j) {
      // exact zeros beyond the declared range
      const auto sr = support_radius(dec.scales[j].grid(), 0.0);
      EXPECT_LT(sr.radius, g3.declared_range(j)) << s << " " << j;
      EXPECT_GE(min_multiplier(dec.scales[j]), -1e-12 * dec.scales[j].multiplier().max());
    }
  }
}

TEST(BaseDecomposition, MasslessExcludesZeroMode) {
  auto dec = decompose_base(0.0, g3, cheb());
  for (const auto& c : dec.contract) EXPECT_TRUE(c.pass) << c.invariant << " " << c.subject;
  EXPECT_NEAR(dec.remainder.multiplier()[0], 0.0, 1e-12);
}

TEST(BaseDecomposition, SpectralBandsWithinTolerance) {
  TorusGeometry g(2, 3, 2, 108);
  SpectralBandsStrategy st(g);
  ASSERT_EQ(st.taus().size(), 3u);
  EXPECT_LT(st.taus()[0], st.taus()[1]);
  auto dec = decompose_base(1.0, g, st);
  EXPECT_EQ(dec.range_tol, 1e-10);
  for (const auto& c : dec.contract) EXPECT_TRUE(c.pass) << c.invariant << " " << c.subject;
}

TEST(BaseDecomposition, StrategyFactory) {
  EXPECT_EQ(make_strategy("cheb-exact", g3)->name(), "cheb-exact");
  EXPECT_THROW(make_strategy("wavelets", g3), DomainError);
}

TEST(BaseDecomposition, EnforceReportsOffender) {
  std::vector<ContractResult> cs{{"psd", "scale 0", 0.0, 0.0, true}, {"range", "scale 2", 30.0, 27.0, false}};
  try {
    enforce(cs);
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_EQ(e.invariant(), "range");
    EXPECT_EQ(e.offender(), "scale 2");
    EXPECT_EQ(e.value(), 30.0);
  }
}

TEST(BaseDecomposition, BoundReportShape) {
  auto dec = decompose_base(1.0, g3, cheb());
  auto rep = base_bound_report(dec, 2);
  EXPECT_EQ(rep.rows.size(), 12u);
  EXPECT_EQ(rep.at(1, 0).e, 1);
  EXPECT_EQ(rep.at(2, 0).e, 2);
  for (const auto& r : rep.rows) EXPECT_GT(r.ratio, 0.0);
}

TEST(BaseDecomposition, WritesManifest) {
  auto dir = std::filesystem::temp_directory_path() / "frd_test_base_write";
  std::filesystem::remove_all(dir);
  auto dec = decompose_base(1.0, g3, cheb());
  write_decomposition(dir, dec);
  std::ifstream in(dir / "manifest.json");
  auto man = nlohmann::json::parse(in);
  EXPECT_EQ(man.at("strategy"), "cheb-exact");
  EXPECT_TRUE(std::filesystem::exists(dir / "scale_3.bin"));
}
