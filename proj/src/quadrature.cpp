#include "frd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "frd/error.hpp"

namespace frd::quad {

Rule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

HalfLineMap map_for_features(std::span<const double> features, double kappa_lo, double kappa_hi) {
  double lo = INFINITY, hi = 0.0;
  for (double f : features) {
    if (!(f > 0.0) || !std::isfinite(f)) continue;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  if (!(hi > 0.0)) lo = hi = 1.0;
  if (!(kappa_lo > 0.0) || !(kappa_hi > 0.0)) throw DomainError("tail exponents must be positive");
  return {1e-3 * lo, 1e3 * hi, kappa_lo, kappa_hi};
}

namespace {

constexpr int kPanelPoints = 10;

enum class Region { lower, middle, upper };

struct Panel {
  Region region;
  double a, b;
  std::vector<double> values;  // per probe, integral over this panel
  std::vector<double> errors;  // per probe, |Q(panel) - Q(halves)|
};

// Physical s and ds/dt for the variable t of each region.
inline void to_s(const HalfLineMap& m, Region r, double t, double& s, double& jac) {
  switch (r) {
    case Region::lower:
      // s = s_lo * t^(1/k), t in (0, 1]
      s = m.s_lo * std::pow(t, 1.0 / m.kappa_lo);
      jac = s / (m.kappa_lo * t);
      break;
    case Region::middle:
      s = std::exp(t);
      jac = s;
      break;
    case Region::upper:
      // s = s_hi * t^(-1/k), t in (0, 1]
      s = m.s_hi * std::pow(t, -1.0 / m.kappa_hi);
      jac = s / (m.kappa_hi * t);
      break;
  }
}

class Integrator {
 public:
  Integrator(std::span<const std::function<double(double)>> probes, const HalfLineMap& map)
      : probes_(probes), map_(map), rule_(gauss_legendre(kPanelPoints)) {}

  std::vector<double> integrate(Region r, double a, double b, std::vector<Node>* nodes = nullptr) const {
    std::vector<double> out(probes_.size(), 0.0);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < kPanelPoints; ++i) {
      double s = 0.0, jac = 0.0;
      to_s(map_, r, mid + half * rule_.x[i], s, jac);
      const double w = half * rule_.w[i] * jac;
      if (nodes) nodes->push_back({s, w});
      for (std::size_t p = 0; p < probes_.size(); ++p) out[p] += w * probes_[p](s);
    }
    return out;
  }

  Panel make(Region r, double a, double b) const {
    Panel p{r, a, b, integrate(r, a, b), {}};
    const double c = 0.5 * (a + b);
    auto left = integrate(r, a, c), right = integrate(r, c, b);
    p.errors.resize(p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) p.errors[i] = std::abs(p.values[i] - left[i] - right[i]);
    return p;
  }

 private:
  std::span<const std::function<double(double)>> probes_;
  HalfLineMap map_;
  Rule rule_;
};

}  // namespace

NodeSet adaptive_half_line(std::span<const std::function<double(double)>> probes, const HalfLineMap& map,
                           double rel_tol, int max_nodes) {
  if (probes.empty()) throw DomainError("no integrands given");
  if (!(map.s_lo > 0.0) || !(map.s_hi > map.s_lo)) throw DomainError("invalid half-line split");
  Integrator integ(probes, map);
  const std::size_t np = probes.size();

  std::vector<Panel> panels;
  panels.push_back(integ.make(Region::lower, 0.0, 1.0));
  const double u_lo = std::log(map.s_lo), u_hi = std::log(map.s_hi);
  const int n_mid = std::max(1, static_cast<int>(std::ceil((u_hi - u_lo) / 3.0)));
  for (int i = 0; i < n_mid; ++i)
    panels.push_back(integ.make(Region::middle, u_lo + (u_hi - u_lo) * i / n_mid,
                                u_lo + (u_hi - u_lo) * (i + 1) / n_mid));
  panels.push_back(integ.make(Region::upper, 0.0, 1.0));

  std::vector<double> total(np), err(np);
  auto tally = [&] {
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(err.begin(), err.end(), 0.0);
    for (const auto& p : panels)
      for (std::size_t i = 0; i < np; ++i) {
        total[i] += p.values[i];
        err[i] += p.errors[i];
      }
  };
  auto worst = [&] {
    double w = 0.0;
    for (std::size_t i = 0; i < np; ++i) w = std::max(w, err[i] / std::max(std::abs(total[i]), 1e-300));
    return w;
  };

  tally();
  while (worst() > rel_tol) {
    if (static_cast<int>(panels.size() + 1) * kPanelPoints > max_nodes)
      throw QuadratureError("s-quadrature did not reach relative tolerance " + std::to_string(rel_tol) +
                                " within " + std::to_string(max_nodes) + " nodes",
                            worst(), static_cast<int>(panels.size()) * kPanelPoints);
    std::size_t pick = 0;
    double score = -1.0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      double sc = 0.0;
      for (std::size_t i = 0; i < np; ++i)
        sc = std::max(sc, panels[k].errors[i] / std::max(std::abs(total[i]), 1e-300));
      if (sc > score) {
        score = sc;
        pick = k;
      }
    }
    Panel old = panels[pick];
    const double c = 0.5 * (old.a + old.b);
    panels[pick] = integ.make(old.region, old.a, c);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(pick) + 1, integ.make(old.region, c, old.b));
    tally();
  }

  NodeSet out;
  for (const auto& p : panels) integ.integrate(p.region, p.a, p.b, &out.nodes);
  std::sort(out.nodes.begin(), out.nodes.end(), [](const Node& x, const Node& y) { return x.s < y.s; });
  out.integrals = total;
  out.rel_errors.resize(np);
  for (std::size_t i = 0; i < np; ++i) out.rel_errors[i] = err[i] / std::max(std::abs(total[i]), 1e-300);
  out.worst_rel_error = worst();
  return out;
}

}  // namespace frd::quad
