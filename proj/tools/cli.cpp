#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <type_traits>

#include "frd/base_frd.hpp"
#include "frd/error.hpp"
#include "frd/field_sampler.hpp"
#include "frd/frac_frd.hpp"
#include "frd/kernel_io.hpp"

namespace frd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int Config::side() const {
  if (M > 0) return M;
  if (L < 2 || J < 0 || J > 12) return 0;  // left for the geometry guard to reject
  return 4 * static_cast<int>(std::lround(std::pow(L, J + 1)));
}

namespace {

template <class T>
T field(const json& doc, const std::string& name) {
  bool ok = false;
  const char* want = "";
  if constexpr (std::is_same_v<T, std::string>) {
    ok = doc.is_string();
    want = "a string";
  } else if constexpr (std::is_floating_point_v<T>) {
    ok = doc.is_number();
    want = "a number";
  } else if constexpr (std::is_unsigned_v<T>) {
    ok = doc.is_number_unsigned();
    want = "a non-negative integer";
  } else {
    ok = doc.is_number_integer();
    want = "an integer";
  }
  if (!ok) throw DomainError("config field '" + name + "': expected " + want + ", got " + doc.dump());
  return doc.get<T>();
}

std::vector<int> int_list(const json& doc, const std::string& name) {
  if (!doc.is_array()) throw DomainError("config field '" + name + "': expected an array of integers");
  std::vector<int> out;
  for (const auto& v : doc) {
    if (!v.is_number_integer()) throw DomainError("config field '" + name + "': expected integers, got " + v.dump());
    out.push_back(v.get<int>());
  }
  return out;
}

void check_keys(const json& doc, const std::string& where, const std::set<std::string>& allowed) {
  if (!doc.is_object()) throw DomainError("config " + where + ": expected an object");
  for (const auto& [k, v] : doc.items())
    if (!allowed.count(k)) throw DomainError("config " + where + ": unknown field '" + k + "'");
}

json read_json_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + what + " " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(what + " " + path.string() + " is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

TorusGeometry geometry_of(const Config& c) { return TorusGeometry(c.d, c.L, c.J, c.side()); }

fs::path manifest_dir(const std::string& arg) {
  fs::path p(arg);
  if (p.filename() == "manifest.json") p = p.parent_path();
  return p;
}

bool all_pass(std::span<const ContractResult> cs) {
  for (const auto& c : cs)
    if (!c.pass) return false;
  return true;
}

json contract_json(std::span<const ContractResult> cs) {
  auto a = json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

// ---- subcommands ----

int cmd_weights(const Config& c, std::ostream& out) {
  const SpectralParams p(c.alpha, c.m2);
  c.quad.validate();
  if (c.t_grid.count < 0) throw DomainError("config field 't_grid.count': must be >= 0");
  if (c.t_grid.count > 0 && !(c.t_grid.lo > 0.0 && c.t_grid.hi >= c.t_grid.lo))
    throw DomainError("config field 't_grid': need 0 < lo <= hi");
  fs::create_directories(c.out_dir);

  std::ofstream csv(fs::path(c.out_dir) / "weights.csv", std::ios::trunc);
  if (!csv) throw IoError("cannot write weights.csv in " + c.out_dir);
  csv << "t,rho,rho_bound,f_alpha,kato_yosida,residual\n";
  double worst = 0.0;
  bool bound_ok = true;
  for (int i = 0; i < c.t_grid.count; ++i) {
    const double t = c.t_grid.count == 1
                         ? c.t_grid.lo
                         : c.t_grid.lo * std::pow(c.t_grid.hi / c.t_grid.lo, static_cast<double>(i) / (c.t_grid.count - 1));
    const double r = rho(t, p), rb = rho_bound(t, p);
    const double f = f_alpha(t, p), ky = kato_yosida(t, p, c.quad);
    const double res = std::abs(ky - f) / f;
    worst = std::max(worst, res);
    bound_ok = bound_ok && r >= 0.0 && r <= rb;
    csv << fmt(t) << ',' << fmt(r) << ',' << fmt(rb) << ',' << fmt(f) << ',' << fmt(ky) << ',' << fmt(res) << '\n';
  }
  json summary{{"alpha", c.alpha},
               {"m2", c.m2},
               {"rows", c.t_grid.count},
               {"c_alpha", c_alpha(p)},
               {"c_alpha_prime", c_alpha_prime(p)},
               {"F", F_integral(p, c.quad)},
               {"F0", F0_integral(p, c.quad)},
               {"max_residual", worst},
               {"residual_limit", 2e-8},
               {"rho_bound_holds", bound_ok}};
  write_json(fs::path(c.out_dir) / "weights.json", summary);
  out << summary.dump(2) << '\n';
  return worst <= 2e-8 && bound_ok ? kOk : kViolation;
}

int cmd_decompose(const Config& c, std::ostream& out) {
  const SpectralParams p(c.alpha, c.m2);
  c.quad.validate();
  const auto g = geometry_of(c);
  auto strategy = make_strategy(c.strategy, g);
  FracOptions opt;
  opt.enforce_contract = false;
  auto dec = decompose_fractional(p, g, *strategy, c.quad, opt);
  const fs::path dir(c.out_dir);
  write_decomposition(dir, dec);
  for (std::size_t j = 0; j < dec.scales.size(); ++j)
    io::write_radial_profile(dir / ("scale_" + std::to_string(j) + "_radial.csv"), dec.scales[j].grid());
  io::write_radial_profile(dir / "remainder_radial.csv", dec.remainder.grid());

  json summary{{"out_dir", c.out_dir},
               {"strategy", dec.strategy},
               {"range_tol", dec.range_tol},
               {"quad_nodes", dec.nodes.size()},
               {"warnings", g.warnings()},
               {"contract_results", contract_json(dec.contract)},
               {"pass", all_pass(dec.contract)}};
  out << summary.dump(2) << '\n';
  return all_pass(dec.contract) ? kOk : kViolation;
}

int cmd_verify(const Config& c, const std::string& manifest, std::ostream& out) {
  const auto dec = read_decomposition(manifest_dir(manifest));
  if (c.p_max < 0) throw DomainError("config field 'p_max': must be >= 0");
  const auto hard = check_fractional(dec, std::find(dec.built.begin(), dec.built.end(), false) == dec.built.end());
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);

  auto theorem = verify_theorem(dec, c.p_max);
  theorem.write_csv(dir / "theorem.csv");
  theorem.write_json(dir / "theorem.json");
  json summary{{"manifest", manifest},
               {"contract_results", contract_json(hard)},
               {"hard_pass", all_pass(hard)},
               {"theorem", theorem.to_json()}};

  if (!c.r_list.empty()) {
    auto coarse = verify_coarse_bound(dec, c.r_list, c.p_max);
    write_json(dir / "coarse.json", coarse.to_json());
    summary["coarse"] = coarse.to_json();
  }
  if (c.cauchy) {
    auto strategy = make_strategy(dec.strategy, dec.geometry);
    auto cauchy = cauchy_check(dec.params, dec.geometry, *strategy, dec.quad, 2, dec.depth());
    write_json(dir / "cauchy.json", cauchy.to_json());
    summary["cauchy"] = cauchy.to_json();
  }
  write_json(dir / "verify.json", summary);
  out << summary.dump(2) << '\n';
  return all_pass(hard) ? kOk : kViolation;
}

int cmd_sample(const Config& c, const std::string& manifest, std::ostream& out, std::ostream& err) {
  if (c.n == 0) throw DomainError("config field 'n': sample count must be >= 1");
  const auto dec = read_decomposition(manifest_dir(manifest));
  if (!(dec.params.m2() > 0.0)) throw DomainError("sampling needs m2 > 0 in the manifest");
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);

  const auto report = sampling::check_sampler(dec, c.seed, c.n);
  std::ofstream csv(dir / "covariance.csv", std::ios::trunc);
  if (!csv) throw IoError("cannot write covariance.csv in " + c.out_dir);
  csv << "quantity,offset,expected,estimate,std_error,z,pass\n";
  for (const auto& ch : report.checks) {
    std::string off;
    for (std::size_t k = 0; k < ch.offset.size(); ++k) off += (k ? " " : "") + std::to_string(ch.offset[k]);
    csv << ch.quantity << ',' << off << ',' << fmt(ch.expected) << ',' << fmt(ch.estimate.estimate) << ','
        << fmt(ch.estimate.std_error) << ',' << fmt(ch.z) << ',' << (ch.pass ? "true" : "false") << '\n';
  }
  write_json(dir / "sample_report.json", report.to_json());

  const std::size_t keep = std::min(c.save, c.n);
  if (keep > 0) {
    const auto fields = sampling::sample_total(dec, c.seed, keep);
    for (const auto& f : fields) io::write_grid(dir / ("sample_" + std::to_string(f.index)), f.field, "sample_total");
  }
  out << report.to_json().dump(2) << '\n';
  if (!report.pass) {
    err << "sample: some |z| > 3. Each check fails by chance with probability ~0.3%; rerun with another --seed "
           "(and/or larger --n). A failure that persists across seeds indicates a real mismatch.\n";
    return kViolation;
  }
  return kOk;
}

int cmd_report(const Config& c, const std::string& manifest, std::ostream& out) {
  const auto dec = read_decomposition(manifest_dir(manifest));
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  auto rows = json::array();
  for (std::size_t j = 0; j < dec.scales.size(); ++j) {
    if (!dec.built[j]) continue;
    const auto& k = dec.scales[j];
    const auto sr = support_radius(k.grid(), dec.range_tol);
    io::write_radial_profile(dir / ("scale_" + std::to_string(j) + "_radial.csv"), k.grid());
    rows.push_back({{"j", j},
                    {"sup", k.grid().sup_norm()},
                    {"support_radius", sr.radius},
                    {"declared_range", dec.geometry.declared_range(static_cast<int>(j))},
                    {"min_multiplier", k.multiplier().min()}});
  }
  io::write_radial_profile(dir / "remainder_radial.csv", dec.remainder.grid());
  json summary{{"manifest", manifest},
               {"alpha", dec.params.alpha()},
               {"m2", dec.params.m2()},
               {"strategy", dec.strategy},
               {"scales", rows},
               {"recorded_contract", contract_json(dec.contract)},
               {"recorded_pass", all_pass(dec.contract)}};
  write_json(dir / "report.json", summary);
  out << summary.dump(2) << '\n';
  return all_pass(dec.contract) ? kOk : kViolation;
}

json error_json(const std::string& kind, const std::exception& e) {
  json j{{"error", kind}, {"message", e.what()}};
  if (auto* cv = dynamic_cast<const ContractViolation*>(&e)) {
    j["invariant"] = cv->invariant();
    j["offender"] = cv->offender();
    j["value"] = cv->value();
  }
  if (auto* qe = dynamic_cast<const QuadratureError*>(&e)) {
    j["achieved_rel_error"] = qe->achieved_rel_error();
    j["nodes_used"] = qe->nodes_used();
  }
  return j;
}

}  // namespace

Config config_from_json(const json& doc) {
  check_keys(doc, "root",
             {"d", "L", "J", "M", "alpha", "m2", "strategy", "quad", "p_max", "r_list", "seed", "n", "out_dir",
              "t_grid", "workers", "cauchy", "save"});
  Config c;
  auto num = [&](const char* k, auto& dst) {
    if (doc.contains(k)) dst = field<std::decay_t<decltype(dst)>>(doc.at(k), k);
  };
  num("d", c.d);
  num("L", c.L);
  num("J", c.J);
  num("M", c.M);
  num("alpha", c.alpha);
  num("m2", c.m2);
  num("strategy", c.strategy);
  num("p_max", c.p_max);
  num("seed", c.seed);
  num("n", c.n);
  num("out_dir", c.out_dir);
  num("workers", c.workers);
  num("save", c.save);
  if (doc.contains("cauchy")) {
    if (!doc.at("cauchy").is_boolean()) throw DomainError("config field 'cauchy': expected a boolean");
    c.cauchy = doc.at("cauchy").get<bool>();
  }
  if (doc.contains("r_list")) c.r_list = int_list(doc.at("r_list"), "r_list");
  if (doc.contains("quad")) {
    const auto& q = doc.at("quad");
    check_keys(q, "field 'quad'", {"rel_tol", "max_nodes"});
    if (q.contains("rel_tol")) c.quad.rel_tol = field<double>(q.at("rel_tol"), "quad.rel_tol");
    if (q.contains("max_nodes")) c.quad.max_nodes = field<int>(q.at("max_nodes"), "quad.max_nodes");
  }
  if (doc.contains("t_grid")) {
    const auto& t = doc.at("t_grid");
    check_keys(t, "field 't_grid'", {"lo", "hi", "count"});
    if (t.contains("lo")) c.t_grid.lo = field<double>(t.at("lo"), "t_grid.lo");
    if (t.contains("hi")) c.t_grid.hi = field<double>(t.at("hi"), "t_grid.hi");
    if (t.contains("count")) c.t_grid.count = field<int>(t.at("count"), "t_grid.count");
  }
  return c;
}

json to_json(const Config& c) {
  return {{"d", c.d},
          {"L", c.L},
          {"J", c.J},
          {"M", c.side()},
          {"alpha", c.alpha},
          {"m2", c.m2},
          {"strategy", c.strategy},
          {"quad", {{"rel_tol", c.quad.rel_tol}, {"max_nodes", c.quad.max_nodes}}},
          {"p_max", c.p_max},
          {"r_list", c.r_list},
          {"seed", c.seed},
          {"n", c.n},
          {"out_dir", c.out_dir},
          {"t_grid", {{"lo", c.t_grid.lo}, {"hi", c.t_grid.hi}, {"count", c.t_grid.count}}},
          {"workers", c.workers},
          {"cauchy", c.cauchy},
          {"save", c.save}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-range decompositions of the fractional lattice resolvent"};
  app.require_subcommand(1);
  std::string config_path, manifest;

  // flag -> config overrides, applied after the config file is read
  std::vector<std::pair<CLI::Option*, std::function<void(Config&)>>> overrides;
  auto add = [&]<class T>(CLI::App* sub, const std::string& flag, const std::string& help, T* /*tag*/,
                          std::type_identity_t<std::function<void(Config&, const T&)>> set) {
    auto value = std::make_shared<T>();
    auto* o = sub->add_option(flag, *value, help);
    overrides.emplace_back(o, [value, set](Config& c) { set(c, *value); });
  };

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config document");
    add(sub, "--out-dir", "output directory", static_cast<std::string*>(nullptr),
        [](Config& c, const std::string& v) { c.out_dir = v; });
    add(sub, "--workers", "worker threads (sets FRD_WORKERS)", static_cast<int*>(nullptr),
        [](Config& c, const int& v) { c.workers = v; });
  };
  auto physics = [&](CLI::App* sub) {
    add(sub, "--alpha", "fractional order in (0, 2)", static_cast<double*>(nullptr),
        [](Config& c, const double& v) { c.alpha = v; });
    add(sub, "--m2", "mass squared >= 0", static_cast<double*>(nullptr), [](Config& c, const double& v) { c.m2 = v; });
    add(sub, "--rel-tol", "s-quadrature relative tolerance", static_cast<double*>(nullptr),
        [](Config& c, const double& v) { c.quad.rel_tol = v; });
    add(sub, "--max-nodes", "s-quadrature node budget", static_cast<int*>(nullptr),
        [](Config& c, const int& v) { c.quad.max_nodes = v; });
  };

  auto* weights = app.add_subcommand("weights", "tabulate rho, f, c, Kato-Yosida residuals, F, F0");
  common(weights);
  physics(weights);
  add(weights, "--t-lo", "smallest t", static_cast<double*>(nullptr), [](Config& c, const double& v) { c.t_grid.lo = v; });
  add(weights, "--t-hi", "largest t", static_cast<double*>(nullptr), [](Config& c, const double& v) { c.t_grid.hi = v; });
  add(weights, "--t-count", "number of log-spaced t (0 = empty table)", static_cast<int*>(nullptr),
      [](Config& c, const int& v) { c.t_grid.count = v; });

  auto* decompose = app.add_subcommand("decompose", "build, check and store a decomposition");
  common(decompose);
  physics(decompose);
  add(decompose, "--d", "dimension", static_cast<int*>(nullptr), [](Config& c, const int& v) { c.d = v; });
  add(decompose, "--L", "block factor", static_cast<int*>(nullptr), [](Config& c, const int& v) { c.L = v; });
  add(decompose, "--J", "deepest scale", static_cast<int*>(nullptr), [](Config& c, const int& v) { c.J = v; });
  add(decompose, "--M", "torus side (default 4 L^(J+1))", static_cast<int*>(nullptr),
      [](Config& c, const int& v) { c.M = v; });
  add(decompose, "--strategy", "cheb-exact | spectral-bands", static_cast<std::string*>(nullptr),
      [](Config& c, const std::string& v) { c.strategy = v; });

  auto* verify = app.add_subcommand("verify", "regularity, coarse-graining and Cauchy reports for a stored decomposition");
  common(verify);
  verify->add_option("manifest", manifest, "decomposition directory or its manifest.json")->required();
  add(verify, "--p-max", "highest derivative order", static_cast<int*>(nullptr),
      [](Config& c, const int& v) { c.p_max = v; });
  add(verify, "--r-list", "coarse-graining factors", static_cast<std::vector<int>*>(nullptr),
      [](Config& c, const std::vector<int>& v) { c.r_list = v; });
  auto* cauchy_flag = verify->add_flag("--cauchy", "also run the Cauchy check");

  auto* sample = app.add_subcommand("sample", "Gaussian fields and the covariance-vs-oracle table");
  common(sample);
  sample->add_option("manifest", manifest, "decomposition directory or its manifest.json")->required();
  add(sample, "--seed", "random seed", static_cast<std::uint64_t*>(nullptr),
      [](Config& c, const std::uint64_t& v) { c.seed = v; });
  add(sample, "--n", "number of samples", static_cast<std::size_t*>(nullptr),
      [](Config& c, const std::size_t& v) { c.n = v; });
  add(sample, "--save", "total fields written to disk", static_cast<std::size_t*>(nullptr),
      [](Config& c, const std::size_t& v) { c.save = v; });

  auto* report = app.add_subcommand("report", "radial profiles and per-scale summary of a stored decomposition");
  common(report);
  report->add_option("manifest", manifest, "decomposition directory or its manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kConfigError;
  }

  try {
    Config c;
    if (!config_path.empty()) c = config_from_json(read_json_file(config_path, "config"));
    for (auto& [opt, apply] : overrides)
      if (opt->count() > 0) apply(c);
    if (cauchy_flag->count() > 0) c.cauchy = true;
    if (c.workers < 0) throw DomainError("config field 'workers': must be >= 0");
    if (c.workers > 0) setenv("FRD_WORKERS", std::to_string(c.workers).c_str(), 1);

    if (*weights) return cmd_weights(c, out);
    if (*decompose) return cmd_decompose(c, out);
    if (*verify) return cmd_verify(c, manifest, out);
    if (*sample) return cmd_sample(c, manifest, out, err);
    if (*report) return cmd_report(c, manifest, out);
    return kConfigError;
  } catch (const ContractViolation& e) {
    err << error_json("contract", e).dump() << '\n';
    return kViolation;
  } catch (const QuadratureError& e) {
    err << error_json("quadrature", e).dump() << '\n';
    return kViolation;
  } catch (const IoError& e) {
    err << error_json("io", e).dump() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << error_json("config", e).dump() << '\n';
    return kConfigError;
  }
}

}  // namespace frd::cli
