#include "frd/base_frd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "frd/error.hpp"
#include "frd/kernel_io.hpp"
#include "frd/oracle.hpp"

namespace frd {

nlohmann::json to_json(const ContractResult& c) {
  return {{"invariant", c.invariant}, {"subject", c.subject}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}};
}

void enforce(std::span<const ContractResult> results) {
  for (const auto& r : results)
    if (!r.pass) throw ContractViolation(r.invariant, r.subject, r.value);
}

Kernel BaseStrategy::scale_kernel(int j, double s) const {
  auto mult = SpectralMultiplier::from_symbol(geometry_, [&](double lambda) { return profile(j, s, lambda); });
  return from_multiplier(mult);
}

// ---------------------------------------------------------------- cheb-exact

ChebExactStrategy::ChebExactStrategy(const TorusGeometry& geometry, int window_order)
    : BaseStrategy(geometry), window_(window_order) {
  double t_lo = 0.0;
  for (int j = 0; j <= geometry.depth(); ++j) {
    const double t_hi = geometry.declared_range(j);
    bands_.push_back(window_.band_coefficients(t_lo, t_hi));
    t_lo = t_hi;
  }
}

double ChebExactStrategy::profile(int j, double s, double lambda) const {
  const auto& g = bands_.at(static_cast<std::size_t>(j));
  const double two_d = 2.0 * geometry().dim();
  const double y = std::clamp(two_d / (two_d + s) * (1.0 - lambda / two_d), -1.0, 1.0);
  // g_0 + 2 sum_{n>=1} g_n T_n(y)
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t n = g.size() - 1; n >= 1; --n) {
    const double b0 = 2.0 * g[n] + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  const double series = g[0] + y * b1 - b2;
  return 2.0 / ((two_d + s) * window_.C()) * series;
}

std::optional<std::size_t> ChebExactStrategy::polynomial_degree(int j) const {
  return bands_.at(static_cast<std::size_t>(j)).size() - 1;
}

ChebyshevSeries ChebExactStrategy::scale_series(int j, double s) const {
  const double two_d = 2.0 * geometry().dim();
  return ChebyshevSeries::interpolate([&](double x) { return profile(j, s, two_d * (1.0 - x)); },
                                      *polynomial_degree(j));
}

Kernel ChebExactStrategy::scale_kernel(int j, double s) const {
  return realize_on_lattice(scale_series(j, s), geometry());
}

// ------------------------------------------------------------ spectral-bands

namespace {

// (e^{-a z} - e^{-b z}) / z with its limit b - a at z = 0
double band_value(double a, double b, double z) {
  if (z == 0.0) return b - a;
  return -std::exp(-a * z) * std::expm1(-(b - a) * z) / z;
}

}  // namespace

SpectralBandsStrategy::SpectralBandsStrategy(const TorusGeometry& geometry) : BaseStrategy(geometry) {
  double prev = 0.0;
  for (int j = 0; j <= geometry.depth(); ++j) {
    const double range = geometry.declared_range(j);
    auto radius = [&](double tau) {
      auto mult = SpectralMultiplier::from_symbol(geometry, [&](double lambda) { return band_value(prev, tau, lambda); });
      return support_radius(from_multiplier(mult).grid(), 1e-10).radius;
    };
    double lo = prev > 0.0 ? prev : 1e-8, hi = range * range;
    if (!(radius(lo) < range)) throw ContractViolation("range calibration", "scale " + std::to_string(j), radius(lo));
    for (int it = 0; it < 60 && hi / lo > 1.0 + 1e-6; ++it) {
      const double mid = std::sqrt(lo * hi);
      (radius(mid) < range ? lo : hi) = mid;
    }
    tau_.push_back(lo);
    prev = lo;
  }
}

double SpectralBandsStrategy::profile(int j, double s, double lambda) const {
  const double a = j == 0 ? 0.0 : tau_.at(static_cast<std::size_t>(j - 1));
  return band_value(a, tau_.at(static_cast<std::size_t>(j)), lambda + s);
}

std::unique_ptr<BaseStrategy> make_strategy(const std::string& name, const TorusGeometry& geometry) {
  if (name == "cheb-exact") return std::make_unique<ChebExactStrategy>(geometry);
  if (name == "spectral-bands") return std::make_unique<SpectralBandsStrategy>(geometry);
  throw DomainError("unknown strategy '" + name + "' (expected cheb-exact or spectral-bands)");
}

// ------------------------------------------------------------ decomposition

std::vector<ContractResult> check_scales(std::span<const Kernel> scales, const TorusGeometry& geometry, double range_tol) {
  std::vector<ContractResult> out;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const auto& k = scales[j];
    const std::string who = "scale " + std::to_string(j);
    const auto& m = k.multiplier();
    const double lim = -1e-12 * std::max(m.max(), 0.0);
    out.push_back({"psd", who, m.min(), lim, m.min() >= lim});
    const double declared = geometry.declared_range(static_cast<int>(j));
    if (!(declared < geometry.half_period()))
      out.push_back({"half_period", who, declared, geometry.half_period(), false});
    auto sr = support_radius(k.grid(), range_tol);
    out.push_back({"range", who, sr.radius, declared, sr.all_zero || sr.radius < declared});
  }
  return out;
}

BaseDecomposition decompose_base(double s, const TorusGeometry& geometry, const BaseStrategy& strategy) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("base mass s must be finite and >= 0, got " + std::to_string(s));
  if (!(strategy.geometry() == geometry)) throw DomainError("strategy was prepared for a different geometry");
  const int J = geometry.depth();

  std::vector<Kernel> scales;
  scales.reserve(J + 1);
  for (int j = 0; j <= J; ++j) scales.push_back(strategy.scale_kernel(j, s));

  const bool exclude = s == 0.0;
  auto resolvent = SpectralMultiplier::from_symbol(geometry, [&](double lambda) {
    return (exclude && lambda == 0.0) ? 0.0 : 1.0 / (lambda + s);
  });
  std::vector<double> rem(resolvent.values().begin(), resolvent.values().end());
  for (const auto& k : scales) {
    auto mv = k.multiplier().values();
    for (std::size_t i = 0; i < rem.size(); ++i) rem[i] -= mv[i];
  }
  if (exclude) rem[0] = 0.0;
  auto remainder = from_multiplier(SpectralMultiplier(geometry, std::move(rem)));

  BaseDecomposition dec{s, geometry, strategy.name(), strategy.range_tol(), std::move(scales), remainder, {}};
  dec.contract = check_scales(dec.scales, geometry, dec.range_tol);

  // the remainder is a difference, so its roundoff scales with the resolvent, not with itself
  const auto& rm = dec.remainder.multiplier();
  const double rlim = -1e-12 * std::max(rm.max(), resolvent.max());
  dec.contract.push_back({"remainder_psd", "remainder", rm.min(), rlim, rm.min() >= rlim});

  std::vector<double> total(dec.remainder.values().begin(), dec.remainder.values().end());
  for (const auto& k : dec.scales) {
    auto v = k.values();
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i];
  }
  auto oracle_kernel = oracle::green_laplace(s, geometry, exclude);
  std::vector<double> expect(oracle_kernel.values().begin(), oracle_kernel.values().end());
  if (exclude) {
    // project the zero mode out of the partial sums as well
    double mean = 0.0;
    for (double v : total) mean += v;
    mean /= static_cast<double>(total.size());
    for (double& v : total) v -= mean;
  }
  const double err = relative_sup_distance(total, expect);
  dec.contract.push_back({"sum", "all scales", err, 1e-10, err <= 1e-10});
  enforce(dec.contract);
  return dec;
}

nlohmann::json BaseDecomposition::manifest() const {
  nlohmann::json j;
  j["kind"] = "base";
  j["s"] = s;
  j["d"] = geometry.dim();
  j["L"] = geometry.base();
  j["J"] = geometry.depth();
  j["M"] = geometry.side();
  j["strategy"] = strategy;
  j["range_tol"] = range_tol;
  auto& r = j["ranges"] = nlohmann::json::array();
  for (int k = 0; k <= geometry.depth(); ++k) r.push_back(declared_range(k));
  auto& c = j["contract_results"] = nlohmann::json::array();
  for (const auto& x : contract) c.push_back(to_json(x));
  return j;
}

BoundReport base_bound_report(const BaseDecomposition& dec, int p_max) {
  if (p_max < 0 || p_max > 3) throw DomainError("p_max must lie in [0, 3]");
  const auto& g = dec.geometry;
  const double L = g.base();
  BoundReport rep;
  rep.kind = "base";
  rep.L = g.base();
  for (int j = 0; j <= g.depth(); ++j) {
    const double view = std::pow(L, j * (g.dim() - 2));
    const double mass = dec.s * std::pow(L, 2.0 * j);
    const int e = mass_exponent(j);
    const double bound = std::pow(1.0 + mass, -e);
    for (int p = 0; p <= p_max; ++p) {
      double sup = 0.0;
      for (int axis = 0; axis < g.dim(); ++axis)
        sup = std::max(sup, forward_derivative(dec.scales[j].grid(), axis, p, 1.0).sup_norm());
      sup *= view * std::pow(L, j * p);
      rep.rows.push_back({j, p, sup, bound, sup / bound, e});
    }
  }
  for (int p = 0; p <= p_max; ++p) rep.expected_decay_rate[p] = 0.0;
  summarize(rep, 1);
  if (dec.remainder.sup_norm() == 0.0) rep.flags.push_back("remainder is identically zero");
  return rep;
}

void write_decomposition(const std::filesystem::path& dir, const BaseDecomposition& dec) {
  std::filesystem::create_directories(dir);
  auto man = dec.manifest();
  auto& files = man["files"] = nlohmann::json::array();
  for (std::size_t j = 0; j < dec.scales.size(); ++j) {
    const std::string stem = "scale_" + std::to_string(j);
    io::write_grid(dir / stem, dec.scales[j].grid(), "base_scale");
    files.push_back(stem);
  }
  io::write_grid(dir / "remainder", dec.remainder.grid(), "base_remainder");
  man["remainder"] = "remainder";
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << man.dump(2) << '\n';
}

}  // namespace frd
