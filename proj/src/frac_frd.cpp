#include "frd/frac_frd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "frd/error.hpp"
#include "frd/kernel_io.hpp"
#include "frd/oracle.hpp"
#include "frd/parallel.hpp"

namespace frd {

namespace {

double ipow(double base, double e) { return std::pow(base, e); }

ContractResult psd_result(const Kernel& k, const std::string& who) {
  const auto& m = k.multiplier();
  const double lim = -1e-12 * std::max(m.max(), 0.0);
  return {"psd", who, m.min(), lim, m.min() >= lim};
}

ContractResult range_result(const Kernel& k, const std::string& who, double declared, double tol) {
  auto sr = support_radius(k.grid(), tol);
  return {"range", who, sr.radius, declared, sr.all_zero || sr.radius < declared};
}

// Scale j integrated against the node weights, sampled where it is needed.
Kernel assemble_scale(int j, const BaseStrategy& strategy, const TorusGeometry& geometry,
                      std::span<const quad::Node> nodes, std::span<const double> weight) {
  const double two_d = 2.0 * geometry.dim();
  if (auto degree = strategy.polynomial_degree(j)) {
    const auto xs = ChebyshevSeries::nodes(*degree + 1);
    std::vector<double> values(xs.size(), 0.0);
    std::vector<double> worst(xs.size(), 0.0);
    std::vector<std::size_t> worst_node(xs.size(), 0);
    parallel::parallel_for(xs.size(), [&](std::size_t p) {
      const double lambda = two_d * (1.0 - xs[p]);
      double acc = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double v = strategy.profile(j, nodes[i].s, lambda);
        // base positivity audit: relative to the resolvent scale 1/(lambda + s)
        const double rel = v * (lambda + nodes[i].s);
        if (rel < worst[p]) {
          worst[p] = rel;
          worst_node[p] = i;
        }
        acc += nodes[i].w * weight[i] * v;
      }
      values[p] = acc;
    });
    const auto it = std::min_element(worst.begin(), worst.end());
    if (*it < -1e-12) {
      const auto p = static_cast<std::size_t>(it - worst.begin());
      throw ContractViolation("base psd", "scale " + std::to_string(j) + " node " + std::to_string(worst_node[p]) +
                                              " (s=" + std::to_string(nodes[worst_node[p]].s) + ")",
                              *it);
    }
    return realize_on_lattice(ChebyshevSeries::from_node_values(values), geometry);
  }
  auto mult = SpectralMultiplier::from_symbol(geometry, [&](double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double v = strategy.profile(j, nodes[i].s, lambda);
      if (v * (lambda + nodes[i].s) < -1e-12)
        throw ContractViolation("base psd", "scale " + std::to_string(j) + " node " + std::to_string(i), v);
      acc += nodes[i].w * weight[i] * v;
    }
    return acc;
  });
  return from_multiplier(mult);
}

std::vector<double> total_values(const FracDecomposition& dec) {
  std::vector<double> total(dec.remainder.values().begin(), dec.remainder.values().end());
  for (const auto& k : dec.scales) {
    auto v = k.values();
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i];
  }
  return total;
}

}  // namespace

std::vector<ContractResult> check_fractional(const FracDecomposition& dec, bool with_sum) {
  const auto& geometry = dec.geometry;
  const auto& params = dec.params;
  std::vector<ContractResult> out;
  for (std::size_t j = 0; j < dec.scales.size(); ++j) {
    if (!dec.built[j]) continue;
    const std::string who = "scale " + std::to_string(j);
    out.push_back(psd_result(dec.scales[j], who));
    out.push_back(range_result(dec.scales[j], who, geometry.declared_range(static_cast<int>(j)), dec.range_tol));
  }
  if (!with_sum) return out;

  auto total = Kernel::symmetrized(GridFunction(geometry, total_values(dec)));
  const auto& tm = total.multiplier();

  // the remainder is a difference, so its roundoff scales with the total, not with itself
  const auto& rm = dec.remainder.multiplier();
  const double lim = -1e-12 * std::max(rm.max(), tm.max());
  out.push_back({"remainder_psd", "remainder", rm.min(), lim, rm.min() >= lim});
  if (params.m2() > 0.0) {
    auto oracle_kernel = oracle::green_fractional(params, geometry);
    const double err = relative_sup_distance(total.values(), oracle_kernel.values());
    out.push_back({"sum", "all scales", err, 1e-6, err <= 1e-6});
    const double z = std::abs(tm[0] - 1.0 / params.m2()) * params.m2();
    out.push_back({"zero_mode", "k = 0", z, 1e-6, z <= 1e-6});
  } else {
    // per-mode identity on lambda > 0; compare against the closed form
    auto target = SpectralMultiplier::from_symbol(geometry, [&](double lambda) {
      return lambda == 0.0 ? 0.0 : std::pow(lambda, -0.5 * params.alpha());
    });
    double worst = 0.0;
    for (std::size_t i = 1; i < tm.values().size(); ++i)
      worst = std::max(worst, std::abs(tm[i] - target[i]) / target[i]);
    out.push_back({"mode_sum", "modes with lambda > 0", worst, 1e-6, worst <= 1e-6});
  }
  return out;
}

FracDecomposition decompose_fractional(const SpectralParams& params, const TorusGeometry& geometry,
                                       const BaseStrategy& strategy, const QuadratureSpec& quad,
                                       const FracOptions& options) {
  quad.validate();
  if (geometry.dim() == 1 && !(params.alpha() < 1.0)) throw DomainError("d = 1 requires alpha < 1");
  if (!(strategy.geometry() == geometry)) throw DomainError("strategy was prepared for a different geometry");
  const int J = geometry.depth();

  auto rn = resolvent_nodes(params, geometry.min_positive_symbol(), 4.0 * geometry.dim(), quad);
  if (options.weight_override)
    for (std::size_t i = 0; i < rn.nodes.size(); ++i) rn.rho[i] = options.weight_override(rn.nodes[i].s);

  std::vector<int> todo;
  if (options.only_scales) {
    todo = *options.only_scales;
    for (int j : todo)
      if (j < 0 || j > J) throw DomainError("scale " + std::to_string(j) + " outside 0.." + std::to_string(J));
  } else {
    todo.resize(J + 1);
    std::iota(todo.begin(), todo.end(), 0);
  }

  FracDecomposition dec{params,  geometry, strategy.name(), strategy.range_tol(), quad, rn.nodes, rn.rho, {}, {},
                        Kernel::zero(geometry), {}, 1};
  dec.scales.assign(J + 1, Kernel::zero(geometry));
  dec.built.assign(J + 1, false);
  for (int j : todo) {
    dec.scales[j] = assemble_scale(j, strategy, geometry, dec.nodes, dec.node_weight);
    dec.built[j] = true;
  }

  if (!options.only_scales) {
    const bool massless = params.m2() == 0.0;
    auto ky = SpectralMultiplier::from_symbol(geometry, [&](double lambda) {
      if (massless && lambda == 0.0) return 0.0;
      double acc = 0.0;
      for (std::size_t i = 0; i < dec.nodes.size(); ++i)
        acc += dec.nodes[i].w * dec.node_weight[i] / (dec.nodes[i].s + lambda);
      return acc;
    });
    std::vector<double> rem(ky.values().begin(), ky.values().end());
    for (const auto& k : dec.scales) {
      auto mv = k.multiplier().values();
      for (std::size_t i = 0; i < rem.size(); ++i) rem[i] -= mv[i];
    }
    if (massless) rem[0] = 0.0;
    dec.remainder = from_multiplier(SpectralMultiplier(geometry, std::move(rem)));
  }
  dec.contract = check_fractional(dec, !options.only_scales);
  if (options.enforce_contract) enforce(dec.contract);
  return dec;
}

Kernel rescaled_view(const FracDecomposition& dec, int j) {
  if (j < 0 || j > dec.depth()) throw DomainError("view level " + std::to_string(j) + " outside 0.." + std::to_string(dec.depth()));
  const auto& g = dec.geometry;
  const double phi = dec.params.field_dimension(g.dim());
  const double factor = ipow(g.base(), 2.0 * j * phi);
  return dec.scales[j].with_geometry(g.with_spacing(Spacing::inverse_power(g.base(), j))).scaled(factor);
}

Kernel unrescale(const Kernel& view, int j, double alpha) {
  const auto& g = view.geometry();
  if (!(g.spacing() == Spacing::inverse_power(g.base(), j))) throw DomainError("kernel is not a level-" + std::to_string(j) + " view");
  const double phi = 0.5 * (g.dim() - alpha);
  return view.with_geometry(g.with_spacing({})).scaled(ipow(g.base(), -2.0 * j * phi));
}

FracDecomposition coarse_grain(const FracDecomposition& dec, int r) {
  if (r < 1) throw DomainError("coarse-graining factor must be >= 1, got " + std::to_string(r));
  if (std::find(dec.built.begin(), dec.built.end(), false) != dec.built.end())
    throw DomainError("coarse graining needs every scale built");
  const int J = dec.depth();
  const int Jc = (J + 1) / r - 1;
  if (Jc < 0) throw DomainError("only " + std::to_string(J + 1) + " scales, cannot group by " + std::to_string(r));
  long base = 1;
  for (int i = 0; i < r; ++i) base *= dec.geometry.base();
  auto g = dec.geometry.with_scales(static_cast<int>(base), Jc);

  FracDecomposition out = dec;
  out.geometry = g;
  out.coarse_factor = dec.coarse_factor * r;
  out.scales.clear();
  out.built.assign(Jc + 1, true);
  out.contract.clear();
  for (int j = 0; j <= Jc; ++j) {
    std::vector<double> v(g.size(), 0.0);
    for (int l = 0; l < r; ++l) {
      auto s = dec.scales[l + j * r].values();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += s[i];
    }
    out.scales.push_back(Kernel::symmetrized(GridFunction(g, std::move(v))));
  }
  std::vector<double> rem(dec.remainder.values().begin(), dec.remainder.values().end());
  for (int k = r * (Jc + 1); k <= J; ++k) {
    auto s = dec.scales[k].values();
    for (std::size_t i = 0; i < rem.size(); ++i) rem[i] += s[i];
  }
  out.remainder = Kernel::symmetrized(GridFunction(g, std::move(rem)));

  for (int j = 0; j <= Jc; ++j) {
    out.contract.push_back(psd_result(out.scales[j], "coarse scale " + std::to_string(j)));
    out.contract.push_back(range_result(out.scales[j], "coarse scale " + std::to_string(j), g.declared_range(j), out.range_tol));
  }
  const double change = relative_sup_distance(total_values(out), total_values(dec));
  out.contract.push_back({"sum_regroup", "all scales", change, 1e-13, change <= 1e-13});
  return out;
}

BoundReport verify_theorem(const FracDecomposition& dec, int p_max) {
  if (p_max < 0 || p_max > 3) throw DomainError("p_max must lie in [0, 3]");
  const auto& g = dec.geometry;
  const double L = g.base(), a = dec.params.alpha(), m2 = dec.params.m2();
  const double phi = dec.params.field_dimension(g.dim());
  BoundReport rep;
  rep.kind = dec.coarse_factor == 1 ? "fractional" : "coarse r=" + std::to_string(dec.coarse_factor);
  rep.L = g.base();
  for (int j = 0; j <= g.depth(); ++j) {
    if (!dec.built[j]) continue;
    const int e = mass_exponent(j);
    for (int p = 0; p <= p_max; ++p) {
      double sup = 0.0;
      for (int axis = 0; axis < g.dim(); ++axis)
        sup = std::max(sup, forward_derivative(dec.scales[j].grid(), axis, p, 1.0).sup_norm());
      const double bound = std::pow(1.0 + std::pow(L, j * a) * m2, -e) * std::pow(L, -(2.0 * phi + p) * j);
      rep.rows.push_back({j, p, sup, bound, sup / bound, e});
    }
  }
  for (int p = 0; p <= p_max; ++p) rep.expected_decay_rate[p] = -(2.0 * phi + p) * std::log(L);
  summarize(rep, 1);
  if (m2 > 0.0) rep.flags.push_back("m2 > 0: fitted rates include the mass suppression");
  return rep;
}

nlohmann::json CoarseReport::to_json() const {
  nlohmann::json j;
  j["geometric_factor"] = geometric_factor;
  j["pass"] = pass;
  auto& ref = j["reference"] = nlohmann::json::object();
  for (const auto& [p, v] : reference) ref[std::to_string(p)] = v;
  auto& arr = j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json o{{"r", e.r}, {"coarse_depth", e.coarse_depth}, {"ranges_ok", e.ranges_ok}, {"sum_change", e.sum_change}};
    for (const auto& [p, v] : e.constant) o["constant"][std::to_string(p)] = v;
    o["report"] = e.report.to_json();
    arr.push_back(o);
  }
  return j;
}

CoarseReport verify_coarse_bound(const FracDecomposition& dec, std::span<const int> r_list, int p_max) {
  CoarseReport out;
  const double L = dec.geometry.base();
  const double two_phi = 2.0 * dec.params.field_dimension(dec.geometry.dim());
  if (!(two_phi > 0.0)) throw DomainError("coarse bound needs d > alpha");
  out.geometric_factor = 1.0 / (1.0 - std::pow(L, -two_phi));
  const auto base = verify_theorem(dec, p_max);
  for (const auto& [p, c] : base.empirical_constant) out.reference[p] = c * out.geometric_factor;

  out.pass = true;
  for (int r : r_list) {
    if (r < 1 || r > 3) throw DomainError("r must be one of 1, 2, 3");
    auto cg = coarse_grain(dec, r);
    CoarseEntry e;
    e.r = r;
    e.coarse_depth = cg.depth();
    e.report = verify_theorem(cg, p_max);
    e.constant = e.report.empirical_constant;
    e.ranges_ok = true;
    for (const auto& c : cg.contract) {
      if (c.invariant == "range" || c.invariant == "psd") e.ranges_ok = e.ranges_ok && c.pass;
      if (c.invariant == "sum_regroup") e.sum_change = c.value;
    }
    bool ok = e.ranges_ok && e.sum_change <= 1e-13;
    for (const auto& [p, c] : e.constant) ok = ok && c <= 2.0 * out.reference[p];
    out.pass = out.pass && ok;
    out.entries.push_back(std::move(e));
  }
  return out;
}

nlohmann::json CauchyReport::to_json() const {
  nlohmann::json o;
  o["j"] = j;
  o["d"] = d;
  o["fitted_rate"] = fitted_rate;
  o["reference_rate"] = reference_rate;
  o["decreasing"] = decreasing;
  o["rate_flag"] = rate_flag;
  return o;
}

CauchyReport cauchy_check(const SpectralParams& params, const TorusGeometry& geometry, const BaseStrategy& strategy,
                          const QuadratureSpec& quad, int j_lo, int j_hi) {
  if (j_lo < 0 || j_hi > geometry.depth() || j_hi - j_lo < 1)
    throw DomainError("cauchy check needs 0 <= j_lo < j_hi <= J");
  const int L = geometry.base();
  const int d = geometry.dim();
  std::vector<std::vector<double>> views;
  for (int j = j_lo; j <= j_hi; ++j) {
    FracOptions opt;
    opt.only_scales = std::vector<int>{j};
    auto p = params.with_mass(params.m2() * std::pow(static_cast<double>(L), -j * params.alpha()));
    auto dec = decompose_fractional(p, geometry, strategy, quad, opt);
    const auto view = rescaled_view(dec, j);
    views.emplace_back(view.values().begin(), view.values().end());
  }

  CauchyReport rep;
  rep.reference_rate = std::pow(static_cast<double>(L), -0.5);
  std::vector<int> off(d), scaled(d);
  for (int j = j_lo; j < j_hi; ++j) {
    const auto& a = views[j - j_lo];
    const auto& b = views[j + 1 - j_lo];
    const int R = static_cast<int>(geometry.declared_range(j));
    const std::size_t span = 2 * static_cast<std::size_t>(R) + 1;
    std::size_t cube = 1;
    for (int k = 0; k < d; ++k) cube *= span;
    double diff = 0.0;
    for (std::size_t q = 0; q < cube; ++q) {
      std::size_t rem = q;
      for (int k = d - 1; k >= 0; --k) {
        off[k] = static_cast<int>(rem % span) - R;
        scaled[k] = off[k] * L;
        rem /= span;
      }
      diff = std::max(diff, std::abs(a[geometry.index_of(off)] - b[geometry.index_of(scaled)]));
    }
    rep.j.push_back(j);
    rep.d.push_back(diff);
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.d.size(); ++i) rep.decreasing = rep.decreasing && rep.d[i] < rep.d[i - 1];
  if (rep.d.size() >= 2) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rep.d.size(); ++i) {
      xs.push_back(rep.j[i]);
      ys.push_back(std::log(rep.d[i]));
    }
    rep.fitted_rate = std::exp(fit_slope(xs, ys));
  } else {
    rep.fitted_rate = std::numeric_limits<double>::quiet_NaN();
  }
  rep.rate_flag = !(rep.fitted_rate > 0.5 * rep.reference_rate && rep.fitted_rate < 2.0 * rep.reference_rate);
  return rep;
}

nlohmann::json FracDecomposition::manifest() const {
  nlohmann::json j;
  j["kind"] = "fractional";
  j["d"] = geometry.dim();
  j["L"] = geometry.base();
  j["J"] = geometry.depth();
  j["M"] = geometry.side();
  j["alpha"] = params.alpha();
  j["m2"] = params.m2();
  j["strategy"] = strategy;
  j["range_tol"] = range_tol;
  j["coarse_factor"] = coarse_factor;
  j["quad"] = {{"rel_tol", quad.rel_tol}, {"max_nodes", quad.max_nodes}};
  auto& qn = j["quad_nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) qn.push_back({nodes[i].s, nodes[i].w, node_weight[i]});
  auto& r = j["ranges"] = nlohmann::json::array();
  for (int k = 0; k <= geometry.depth(); ++k) r.push_back(geometry.declared_range(k));
  auto& c = j["contract_results"] = nlohmann::json::array();
  for (const auto& x : contract) c.push_back(to_json(x));
  return j;
}

void write_decomposition(const std::filesystem::path& dir, const FracDecomposition& dec) {
  std::filesystem::create_directories(dir);
  auto man = dec.manifest();
  auto& files = man["files"] = nlohmann::json::array();
  for (std::size_t j = 0; j < dec.scales.size(); ++j) {
    if (!dec.built[j]) {
      files.push_back(nullptr);
      continue;
    }
    const std::string stem = "scale_" + std::to_string(j);
    io::write_grid(dir / stem, dec.scales[j].grid(), "frac_scale");
    files.push_back(stem);
  }
  io::write_grid(dir / "remainder", dec.remainder.grid(), "frac_remainder");
  man["remainder"] = "remainder";
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << man.dump(2) << '\n';
}

FracDecomposition read_decomposition(const std::filesystem::path& dir) {
  nlohmann::json man;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("missing manifest " + (dir / "manifest.json").string());
    try {
      in >> man;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("corrupted manifest: " + std::string(e.what()));
    }
  }
  try {
    if (man.at("kind").get<std::string>() != "fractional") throw IoError("manifest is not a fractional decomposition");
    TorusGeometry g(man.at("d").get<int>(), man.at("L").get<int>(), man.at("J").get<int>(), man.at("M").get<int>());
    SpectralParams params(man.at("alpha").get<double>(), man.at("m2").get<double>());
    QuadratureSpec q{man.at("quad").at("rel_tol").get<double>(), man.at("quad").at("max_nodes").get<int>()};
    FracDecomposition dec{params, g, man.at("strategy").get<std::string>(), man.at("range_tol").get<double>(), q, {}, {},
                          {}, {}, Kernel::zero(g), {}, man.value("coarse_factor", 1)};
    for (const auto& n : man.at("quad_nodes")) {
      dec.nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
      dec.node_weight.push_back(n.at(2).get<double>());
    }
    const auto& files = man.at("files");
    if (files.size() != static_cast<std::size_t>(g.depth() + 1)) throw IoError("manifest lists the wrong number of scales");
    for (const auto& f : files) {
      if (f.is_null()) {
        dec.scales.push_back(Kernel::zero(g));
        dec.built.push_back(false);
        continue;
      }
      auto stored = io::read_grid(dir / f.get<std::string>());
      if (!(stored.grid.geometry() == g)) throw IoError("geometry of " + f.get<std::string>() + " disagrees with the manifest");
      dec.scales.push_back(Kernel::from_even(g, {stored.grid.values().begin(), stored.grid.values().end()}));
      dec.built.push_back(true);
    }
    auto rem = io::read_grid(dir / man.at("remainder").get<std::string>());
    if (!(rem.grid.geometry() == g)) throw IoError("geometry of the remainder disagrees with the manifest");
    dec.remainder = Kernel::from_even(g, {rem.grid.values().begin(), rem.grid.values().end()});
    for (const auto& c : man.at("contract_results"))
      dec.contract.push_back({c.at("invariant").get<std::string>(), c.at("subject").get<std::string>(),
                              c.at("value").get<double>(), c.at("limit").get<double>(), c.at("pass").get<bool>()});
    return dec;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupted manifest: " + std::string(e.what()));
  }
}

}  // namespace frd
