#pragma once

// Gauss-Legendre rules and an adaptive node set for integrals over (0, inf)
// shared by several integrands at once.

#include <functional>
#include <span>
#include <vector>

namespace frd::quad {

struct Rule {
  std::vector<double> x;  ///< abscissae on [-1, 1], ascending
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
Rule gauss_legendre(int n);

struct Node {
  double s;
  double w;
};

/// How (0, inf) is split: a power-law lower tail [0, s_lo], a logarithmic
/// middle [s_lo, s_hi] and a power-law upper tail [s_hi, inf). The tail maps
/// flatten integrands that behave like s^(kappa_lo - 1) near 0 and
/// s^(-1 - kappa_hi) near infinity.
struct HalfLineMap {
  double s_lo;
  double s_hi;
  double kappa_lo;
  double kappa_hi;
};

/// s_lo = 1e-3 * min(features), s_hi = 1e3 * max(features).
HalfLineMap map_for_features(std::span<const double> features, double kappa_lo, double kappa_hi);

struct NodeSet {
  std::vector<Node> nodes;          ///< ascending in s
  std::vector<double> integrals;    ///< per probe
  std::vector<double> rel_errors;   ///< per probe, estimated
  double worst_rel_error = 0.0;
};

/// Refines Gauss-Legendre panels (10 points each) until every probe reaches
/// rel_tol, splitting the worst panel first. Throws QuadratureError when the
/// node budget runs out.
NodeSet adaptive_half_line(std::span<const std::function<double(double)>> probes, const HalfLineMap& map,
                           double rel_tol, int max_nodes);

}  // namespace frd::quad
