#pragma once

// Scalar layer: f_alpha, the Kato-Yosida weight rho_alpha, its bound constants,
// the resolvent integral representation and the bound integrals F, F0.

#include <span>
#include <vector>

#include "frd/quadrature.hpp"

namespace frd {

/// (alpha, m^2) of ((-Delta)^{alpha/2} + m^2)^{-1}.
class SpectralParams {
 public:
  SpectralParams(double alpha, double m2);

  double alpha() const noexcept { return alpha_; }
  double m2() const noexcept { return m2_; }
  /// (d - alpha) / 2
  double field_dimension(int d) const noexcept { return 0.5 * (d - alpha_); }
  SpectralParams with_mass(double m2) const { return {alpha_, m2}; }

 private:
  double alpha_;
  double m2_;
};

struct QuadratureSpec {
  double rel_tol = 1e-8;
  int max_nodes = 400;

  void validate() const;
};

double f_alpha(double t, const SpectralParams& p);
double rho(double s, const SpectralParams& p);
/// c_alpha * s^{alpha/2} / (s^alpha + m^4)
double rho_bound(double s, const SpectralParams& p);
double c_alpha(const SpectralParams& p);
double c_alpha_prime(const SpectralParams& p);

/// int_0^inf rho(s) / (s + t) ds.
double kato_yosida(double t, const SpectralParams& p, const QuadratureSpec& q);

/// L^{-j alpha} rho(s L^{-2j}, m^2); checks it against rho(s, L^{j alpha} m^2)
/// and throws ContractViolation past 1e-13 relative.
double rho_rescaled(double s, int j, const SpectralParams& p, int L);

/// int s^{a/2}/(s^a + m^4) (1+s)^{-2} ds and the (1+s)^{-1} variant.
double F_integral(const SpectralParams& p, const QuadratureSpec& q);
double F0_integral(const SpectralParams& p, const QuadratureSpec& q);

/// One s-node set shared by every mode of a torus: chosen so that
/// sum_i w_i rho(s_i) / (s_i + lambda) reaches rel_tol at each probe lambda.
struct ResolventNodes {
  std::vector<quad::Node> nodes;
  std::vector<double> rho;  ///< rho(s_i) at each node (or an override weight)
  std::vector<double> probes;
  double worst_rel_error = 0.0;

  /// sum_i w_i rho_i / (s_i + lambda)
  double resolvent(double lambda) const;
};

/// Probes: lambda_min, log-spaced values up to lambda_max, and 0 when m^2 > 0.
ResolventNodes resolvent_nodes(const SpectralParams& p, double lambda_min, double lambda_max,
                               const QuadratureSpec& q);

}  // namespace frd
