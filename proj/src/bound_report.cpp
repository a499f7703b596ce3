#include "frd/bound_report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "frd/error.hpp"

namespace frd {

const BoundRow& BoundReport::at(int j, int p) const {
  for (const auto& r : rows)
    if (r.j == j && r.p == p) return r;
  throw DomainError("no bound row for j=" + std::to_string(j) + " p=" + std::to_string(p));
}

int mass_exponent(int j) { return j >= 2 ? 2 : 1; }

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

void summarize(BoundReport& report, int j_fit_from) {
  std::map<int, std::vector<const BoundRow*>> by_p;
  for (const auto& r : report.rows) by_p[r.p].push_back(&r);
  for (auto& [p, rows] : by_p) {
    std::vector<double> xs, ys;
    double cmax = 0.0, lo = INFINITY, hi = 0.0;
    for (const auto* r : rows) {
      cmax = std::max(cmax, r->ratio);
      if (r->j >= 2) {
        lo = std::min(lo, r->ratio);
        hi = std::max(hi, r->ratio);
      }
      if (r->j >= j_fit_from && r->sup_norm > 0.0) {
        xs.push_back(r->j);
        ys.push_back(std::log(r->sup_norm));
      }
    }
    report.fitted_decay_rate[p] = fit_slope(xs, ys);
    report.empirical_constant[p] = cmax;
    report.ratio_spread[p] = hi > 0.0 ? hi / lo : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(cmax)) report.flags.push_back("non-finite ratio at p=" + std::to_string(p));
  }
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["L"] = L;
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"j", r.j}, {"p", r.p}, {"sup_norm", r.sup_norm}, {"bound", r.bound}, {"ratio", r.ratio}, {"e", r.e}});
  auto per_p = [](const std::map<int, double>& m) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [p, v] : m) o[std::to_string(p)] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    return o;
  };
  j["fitted_decay_rate"] = per_p(fitted_decay_rate);
  j["expected_decay_rate"] = per_p(expected_decay_rate);
  j["empirical_constant"] = per_p(empirical_constant);
  j["ratio_spread"] = per_p(ratio_spread);
  j["flags"] = flags;
  return j;
}

void BoundReport::write_csv(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string());
  out.precision(17);
  out << "j,p,sup_norm,bound,ratio,e\n";
  for (const auto& r : rows) out << r.j << ',' << r.p << ',' << r.sup_norm << ',' << r.bound << ',' << r.ratio << ',' << r.e << '\n';
}

void BoundReport::write_json(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace frd
