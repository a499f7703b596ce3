#include "frd/spectral_weight.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "frd/error.hpp"

namespace frd {

SpectralParams::SpectralParams(double alpha, double m2) : alpha_(alpha), m2_(m2) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("alpha must lie in the open interval (0, 2), got " + std::to_string(alpha));
  if (!(m2 >= 0.0) || !std::isfinite(m2)) throw DomainError("m2 must be a finite value >= 0, got " + std::to_string(m2));
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
    throw DomainError("quad.rel_tol must lie in (0, 1e-2], got " + std::to_string(rel_tol));
  if (max_nodes < 32) throw DomainError("quad.max_nodes must be >= 32, got " + std::to_string(max_nodes));
}

double f_alpha(double t, const SpectralParams& p) {
  if (!(t > 0.0)) throw DomainError("f_alpha needs t > 0, got " + std::to_string(t));
  return 1.0 / (std::pow(t, 0.5 * p.alpha()) + p.m2());
}

double rho(double s, const SpectralParams& p) {
  if (!(s > 0.0)) throw DomainError("rho needs s > 0, got " + std::to_string(s));
  const double a = p.alpha(), m2 = p.m2();
  const double half_angle = 0.5 * std::numbers::pi * a;
  const double sh = std::pow(s, 0.5 * a);
  // s^a + m^4 + 2 m^2 s^{a/2} cos = (s^{a/2} + m^2 cos)^2 + (m^2 sin)^2, free of cancellation
  const double re = sh + m2 * std::cos(half_angle), im = m2 * std::sin(half_angle);
  return std::sin(half_angle) / std::numbers::pi * sh / (re * re + im * im);
}

double rho_bound(double s, const SpectralParams& p) {
  if (!(s > 0.0)) throw DomainError("rho bound needs s > 0");
  const double sh = std::pow(s, 0.5 * p.alpha());
  return c_alpha(p) * sh / (sh * sh + p.m2() * p.m2());
}

double c_alpha(const SpectralParams& p) {
  const double h = 0.5 * std::numbers::pi * p.alpha();
  return std::sin(h) / std::numbers::pi / c_alpha_prime(p);
}

double c_alpha_prime(const SpectralParams& p) {
  // 1 - |cos h| as 2 sin^2(h/2) or 2 cos^2(h/2), h = pi a / 2
  const double q = 0.25 * std::numbers::pi * p.alpha();
  const double t = p.alpha() <= 1.0 ? std::sin(q) : std::cos(q);
  return 2.0 * t * t;
}

namespace {

double integrate(const std::function<double(double)>& g, std::span<const double> features, double kappa_lo,
                 double kappa_hi, const QuadratureSpec& q) {
  q.validate();
  const std::function<double(double)> probes[] = {g};
  auto map = quad::map_for_features(features, kappa_lo, kappa_hi);
  return quad::adaptive_half_line(probes, map, q.rel_tol, q.max_nodes).integrals[0];
}

// rho ~ s^{-a/2} near 0 when m = 0, s^{a/2} otherwise
double lower_exponent(const SpectralParams& p) { return p.m2() > 0.0 ? 1.0 + 0.5 * p.alpha() : 1.0 - 0.5 * p.alpha(); }

double mass_feature(const SpectralParams& p) { return p.m2() > 0.0 ? std::pow(p.m2(), 2.0 / p.alpha()) : 1.0; }

}  // namespace

double kato_yosida(double t, const SpectralParams& p, const QuadratureSpec& q) {
  if (!(t > 0.0)) throw DomainError("kato_yosida needs t > 0, got " + std::to_string(t));
  const double features[] = {t, mass_feature(p), 1.0};
  return integrate([&](double s) { return rho(s, p) / (s + t); }, features, lower_exponent(p), 0.5 * p.alpha(), q);
}

double rho_rescaled(double s, int j, const SpectralParams& p, int L) {
  if (!(s > 0.0)) throw DomainError("rho_rescaled needs s > 0");
  if (j < 0) throw DomainError("rho_rescaled needs j >= 0");
  if (L < 2) throw DomainError("rho_rescaled needs L >= 2");
  const double a = p.alpha();
  const double lhs = std::pow(static_cast<double>(L), -j * a) * rho(s * std::pow(static_cast<double>(L), -2.0 * j), p);
  const double rhs = rho(s, p.with_mass(std::pow(static_cast<double>(L), j * a) * p.m2()));
  const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  if (rel > 1e-13)
    throw ContractViolation("rescaling identity", "s=" + std::to_string(s) + " j=" + std::to_string(j), rel);
  return lhs;
}

double F_integral(const SpectralParams& p, const QuadratureSpec& q) {
  const double a = p.alpha(), m4 = p.m2() * p.m2();
  const double features[] = {1.0, mass_feature(p)};
  return integrate(
      [&](double s) {
        const double sh = std::pow(s, 0.5 * a);
        return sh / (sh * sh + m4) / ((1.0 + s) * (1.0 + s));
      },
      features, lower_exponent(p), 0.5 * a + 1.0, q);
}

double F0_integral(const SpectralParams& p, const QuadratureSpec& q) {
  const double a = p.alpha(), m4 = p.m2() * p.m2();
  const double features[] = {1.0, mass_feature(p)};
  return integrate(
      [&](double s) {
        const double sh = std::pow(s, 0.5 * a);
        return sh / (sh * sh + m4) / (1.0 + s);
      },
      features, lower_exponent(p), 0.5 * a, q);
}

double ResolventNodes::resolvent(double lambda) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += nodes[i].w * rho[i] / (nodes[i].s + lambda);
  return acc;
}

ResolventNodes resolvent_nodes(const SpectralParams& p, double lambda_min, double lambda_max,
                               const QuadratureSpec& q) {
  q.validate();
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min)) throw DomainError("invalid probe interval");
  ResolventNodes out;
  const int per_decade = 2;
  const double decades = std::log10(lambda_max / lambda_min);
  const int count = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  for (int i = 0; i <= count; ++i) out.probes.push_back(lambda_min * std::pow(lambda_max / lambda_min, double(i) / count));
  if (p.m2() > 0.0) out.probes.push_back(0.0);

  std::vector<std::function<double(double)>> fns;
  for (double lam : out.probes) fns.push_back([lam, &p](double s) { return rho(s, p) / (s + lam); });
  std::vector<double> features = out.probes;
  features.push_back(mass_feature(p));
  features.push_back(1.0);
  // With m > 0 the zero probe behaves like s^{a/2 - 1} near the origin.
  const double kappa_lo = p.m2() > 0.0 ? 0.5 * p.alpha() : 1.0 - 0.5 * p.alpha();
  auto map = quad::map_for_features(features, kappa_lo, 0.5 * p.alpha());
  auto set = quad::adaptive_half_line(fns, map, q.rel_tol, q.max_nodes);
  out.nodes = std::move(set.nodes);
  out.worst_rel_error = set.worst_rel_error;
  out.rho.reserve(out.nodes.size());
  for (const auto& n : out.nodes) out.rho.push_back(rho(n.s, p));
  return out;
}

}  // namespace frd
