#pragma once

// Finite-range decomposition of ((-Delta)^{alpha/2} + m^2)^{-1}: every base
// scale is integrated against rho_alpha(s, m^2) ds on one shared node set, so
// positivity, range and telescoping carry over scale by scale.

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "frd/base_frd.hpp"
#include "frd/bound_report.hpp"
#include "frd/spectral_weight.hpp"

namespace frd {

struct FracDecomposition {
  SpectralParams params;
  TorusGeometry geometry;
  std::string strategy;
  double range_tol;
  QuadratureSpec quad;
  std::vector<quad::Node> nodes;
  std::vector<double> node_weight;  ///< rho at each node (or the override)
  std::vector<Kernel> scales;       ///< index j; only requested scales are non-empty when built partially
  std::vector<bool> built;
  Kernel remainder;
  std::vector<ContractResult> contract;
  int coarse_factor = 1;  ///< r when this came from coarse_grain, base L = L0^r

  int depth() const noexcept { return geometry.depth(); }
  nlohmann::json manifest() const;
};

struct FracOptions {
  /// Replaces rho_alpha(s, m^2) at every node (e.g. the explicit massless weight).
  std::function<double(double)> weight_override;
  /// Build only these scales; skips the remainder and the sum checks.
  std::optional<std::vector<int>> only_scales;
  /// Throw on contract failure (otherwise results are only recorded).
  bool enforce_contract = true;
};

FracDecomposition decompose_fractional(const SpectralParams& params, const TorusGeometry& geometry,
                                       const BaseStrategy& strategy, const QuadratureSpec& quad,
                                       const FracOptions& options = {});

/// psd and range of every built scale; with_sum adds remainder psd and the
/// sum against green_fractional (m^2 > 0) or the per-mode identity (m^2 = 0).
std::vector<ContractResult> check_fractional(const FracDecomposition& dec, bool with_sum = true);

/// Gamma_{j,alpha}(., L^{j alpha} m^2): same grid, spacing L^{-j}, values times L^{2j[phi]}.
Kernel rescaled_view(const FracDecomposition& dec, int j);
/// Inverse of rescaled_view for level j.
Kernel unrescale(const Kernel& view, int j, double alpha);

/// Regroups blocks of r consecutive scales into scales of base L^r; scales past
/// the last full block join the remainder.
FracDecomposition coarse_grain(const FracDecomposition& dec, int r);

/// Unit-lattice derivative sup-norms of every scale against
/// (1 + L^{j alpha} m^2)^{-e(j)} L^{-(2[phi] + p) j}; decay fitted over j >= 1.
BoundReport verify_theorem(const FracDecomposition& dec, int p_max);

struct CoarseEntry {
  int r = 1;
  int coarse_depth = 0;
  std::map<int, double> constant;  ///< per p
  bool ranges_ok = false;
  double sum_change = 0.0;  ///< relative sup-norm change of the total
  BoundReport report;
};

struct CoarseReport {
  double geometric_factor = 0.0;  ///< (1 - L^{-2[phi]})^{-1}
  std::vector<CoarseEntry> entries;
  std::map<int, double> reference;  ///< per p: r=1 constant times geometric_factor
  bool pass = false;                ///< every constant within a factor 2 of the reference, ranges and sums ok
  nlohmann::json to_json() const;
};

CoarseReport verify_coarse_bound(const FracDecomposition& dec, std::span<const int> r_list, int p_max);

struct CauchyReport {
  std::vector<int> j;      ///< the j of each difference d_j
  std::vector<double> d;   ///< sup |V_j(z) - V_{j+1}(L z)|
  double fitted_rate = 0.0;  ///< exp(slope of log d_j)
  double reference_rate = 0.0;  ///< L^{-1/2}
  bool decreasing = false;
  bool rate_flag = false;  ///< fitted rate far (factor > 2) from the reference
  nlohmann::json to_json() const;
};

/// Views j = j_lo..j_hi, each from a build with mass m^2 L^{-j alpha} (so that
/// every view carries mass m^2), compared on the common lattice of level j.
CauchyReport cauchy_check(const SpectralParams& params, const TorusGeometry& geometry, const BaseStrategy& strategy,
                          const QuadratureSpec& quad, int j_lo, int j_hi);

/// Kernel files per scale, remainder and manifest.json.
void write_decomposition(const std::filesystem::path& dir, const FracDecomposition& dec);
/// Loads what write_decomposition stored; IoError on missing or inconsistent files.
FracDecomposition read_decomposition(const std::filesystem::path& dir);

}  // namespace frd
