#include "frd/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "frd/error.hpp"

namespace frd::oracle {

namespace {

void check_dimension(const SpectralParams& p, const TorusGeometry& g) {
  if (g.dim() == 1 && !(p.alpha() < 1.0))
    throw DomainError("d = 1 requires alpha < 1, got alpha = " + std::to_string(p.alpha()));
}

}  // namespace

Kernel green_laplace(double s, const TorusGeometry& geometry, bool exclude_zero_mode) {
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  if (s <= 0.0) {
    if (!exclude_zero_mode)
      throw DomainError("s = " + std::to_string(s) + " needs the zero mode excluded");
    if (!(s > -geometry.min_positive_symbol()))
      throw DomainError("s = " + std::to_string(s) + " closes the spectral gap (lambda_min = " +
                        std::to_string(geometry.min_positive_symbol()) + ")");
  }
  auto mult = SpectralMultiplier::from_symbol(geometry, [&](double lambda) {
    if (lambda == 0.0 && exclude_zero_mode) return 0.0;
    return 1.0 / (lambda + s);
  });
  return from_multiplier(mult);
}

Kernel green_fractional(const SpectralParams& params, const TorusGeometry& geometry, bool exclude_zero_mode) {
  check_dimension(params, geometry);
  if (params.m2() == 0.0 && !exclude_zero_mode) throw DomainError("m2 = 0 needs the zero mode excluded");
  const double h = 0.5 * params.alpha(), m2 = params.m2();
  auto mult = SpectralMultiplier::from_symbol(geometry, [&](double lambda) {
    if (lambda == 0.0 && exclude_zero_mode) return 0.0;
    return 1.0 / (std::pow(lambda, h) + m2);
  });
  return from_multiplier(mult);
}

RepresentationCheck m0_representation_check(double alpha, const TorusGeometry& geometry, const QuadratureSpec& quad) {
  SpectralParams p(alpha, 0.0);
  check_dimension(p, geometry);
  const auto lhs = green_fractional(p, geometry, true);

  auto nodes = resolvent_nodes(p, geometry.min_positive_symbol(), 4.0 * geometry.dim(), quad);
  const double pref = std::sin(0.5 * std::numbers::pi * alpha) / std::numbers::pi;
  std::vector<double> rhs(geometry.size(), 0.0);
  for (const auto& n : nodes.nodes) {
    const auto g = green_laplace(n.s, geometry, true);
    const double w = n.w * pref * std::pow(n.s, -0.5 * alpha);
    auto v = g.values();
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += w * v[i];
  }
  RepresentationCheck out;
  out.residual = relative_sup_distance(rhs, lhs.values());
  out.nodes = nodes.nodes.size();
  out.pass = out.residual <= 1e-6;
  return out;
}

}  // namespace frd::oracle
