#pragma once

// Measured derivative sup-norms per scale against the expected decay profile.

#include <filesystem>
#include <json.hpp>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace frd {

struct BoundRow {
  int j = 0;
  int p = 0;
  double sup_norm = 0.0;
  double bound = 0.0;  ///< right-hand side with the constant factored out
  double ratio = 0.0;  ///< sup_norm / bound
  int e = 0;           ///< mass exponent selector
};

struct BoundReport {
  std::string kind;
  int L = 0;
  std::vector<BoundRow> rows;
  std::map<int, double> fitted_decay_rate;    ///< per p: slope of log sup_norm against j
  std::map<int, double> expected_decay_rate;  ///< per p
  std::map<int, double> empirical_constant;   ///< per p: max ratio over j
  std::map<int, double> ratio_spread;         ///< per p: max/min ratio over j >= 2
  std::vector<std::string> flags;

  const BoundRow& at(int j, int p) const;
  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;
};

/// 2 for j >= 2, 1 for j in {0, 1}.
int mass_exponent(int j);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// Fills fitted_decay_rate (over j >= j_fit_from), empirical_constant and ratio_spread from rows.
void summarize(BoundReport& report, int j_fit_from);

}  // namespace frd
