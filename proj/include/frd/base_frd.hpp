#pragma once

// Finite-range decompositions of the ordinary lattice resolvent (-Delta + s)^{-1}.
//
// "cheb-exact": scale j is the t-band [L^j, L^{j+1}] (t_{-1} = 0) of
//   1/(lambda + s) = 2 / ((2d + s) C) int_0^inf W_t(phi) dt,
//   cos(phi) = (2d / (2d + s)) (1 - lambda / (2d)),
// where W_t(phi) = sum_n omega(n/t) e^{i n phi} >= 0 for a B-spline window
// omega. Each band is a polynomial of degree L^{j+1} - 1 in the averaging
// operator, hence exactly psd and supported in |x| < L^{j+1}.
//
// "spectral-bands": heat-kernel bands (e^{-tau_{j-1} z} - e^{-tau_j z}) / z,
// z = lambda + s, with tau_j calibrated so that the range holds to 1e-10.

#include <filesystem>
#include <json.hpp>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frd/bound_report.hpp"
#include "frd/chebyshev.hpp"
#include "frd/lattice.hpp"
#include "frd/window.hpp"

namespace frd {

struct ContractResult {
  std::string invariant;  ///< "psd", "range", "sum", "remainder_psd"
  std::string subject;    ///< e.g. "scale 2"
  double value = 0.0;     ///< measured quantity
  double limit = 0.0;     ///< threshold it is compared with
  bool pass = false;
};

nlohmann::json to_json(const ContractResult& c);

/// Throws ContractViolation for the first failing entry.
void enforce(std::span<const ContractResult> results);

class BaseStrategy {
 public:
  virtual ~BaseStrategy() = default;

  virtual std::string name() const = 0;
  /// Relative tolerance under which ranges are certified (0 = exact support).
  virtual double range_tol() const = 0;
  const TorusGeometry& geometry() const noexcept { return geometry_; }

  /// Multiplier of scale j at symbol value lambda for base mass s.
  virtual double profile(int j, double s, double lambda) const = 0;
  /// Degree in P = 1 - (-Delta)/(2d) if scale j is a polynomial in it.
  virtual std::optional<std::size_t> polynomial_degree(int j) const { (void)j; return std::nullopt; }

  /// Position-space kernel of scale j at base mass s.
  virtual Kernel scale_kernel(int j, double s) const;

 protected:
  explicit BaseStrategy(TorusGeometry geometry) : geometry_(geometry) {}

 private:
  TorusGeometry geometry_;
};

class ChebExactStrategy final : public BaseStrategy {
 public:
  explicit ChebExactStrategy(const TorusGeometry& geometry, int window_order = 6);

  std::string name() const override { return "cheb-exact"; }
  double range_tol() const override { return 0.0; }
  double profile(int j, double s, double lambda) const override;
  std::optional<std::size_t> polynomial_degree(int j) const override;
  Kernel scale_kernel(int j, double s) const override;

  /// Chebyshev series of scale j in the variable x = 1 - lambda/(2d).
  ChebyshevSeries scale_series(int j, double s) const;
  const BSplineWindow& window() const noexcept { return window_; }
  std::span<const double> band(int j) const { return bands_.at(static_cast<std::size_t>(j)); }

 private:
  BSplineWindow window_;
  std::vector<std::vector<double>> bands_;
};

class SpectralBandsStrategy final : public BaseStrategy {
 public:
  /// Calibrates tau_j by bisection on this geometry (s = 0 kernels).
  explicit SpectralBandsStrategy(const TorusGeometry& geometry);

  std::string name() const override { return "spectral-bands"; }
  double range_tol() const override { return 1e-10; }
  double profile(int j, double s, double lambda) const override;
  std::span<const double> taus() const noexcept { return tau_; }

 private:
  std::vector<double> tau_;
};

/// "cheb-exact" or "spectral-bands"; DomainError otherwise.
std::unique_ptr<BaseStrategy> make_strategy(const std::string& name, const TorusGeometry& geometry);

struct BaseDecomposition {
  double s;
  TorusGeometry geometry;
  std::string strategy;
  double range_tol;
  std::vector<Kernel> scales;
  Kernel remainder;
  std::vector<ContractResult> contract;

  double declared_range(int j) const { return geometry.declared_range(j); }
  nlohmann::json manifest() const;
};

/// Builds scales 0..J and the spectral remainder, then checks psd, range and
/// the telescoping sum against the independent resolvent. At s = 0 the zero
/// mode is excluded from the remainder and from the sum comparison.
/// Throws ContractViolation on failure.
BaseDecomposition decompose_base(double s, const TorusGeometry& geometry, const BaseStrategy& strategy);

/// Contract checks shared by every decomposition: psd and range per scale.
std::vector<ContractResult> check_scales(std::span<const Kernel> scales, const TorusGeometry& geometry, double range_tol);

/// Rescaled views Gamma_j(., s L^{2j}) = L^{j(d-2)} Gamma~_j, derivatives with
/// increment L^{-j}, against (1 + s L^{2j})^{-e(j)}.
BoundReport base_bound_report(const BaseDecomposition& dec, int p_max);

/// Writes one kernel file per scale, the remainder and manifest.json.
void write_decomposition(const std::filesystem::path& dir, const BaseDecomposition& dec);

}  // namespace frd
