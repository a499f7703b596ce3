#pragma once

// Batch front end: weights | decompose | verify | sample | report.
// Exit codes: 0 all hard invariants pass, 1 invariant violation, 2 configuration/input error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "frd/spectral_weight.hpp"

namespace frd::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kConfigError = 2;

struct TGrid {
  double lo = 1e-3;
  double hi = 1e3;
  int count = 13;  ///< log-spaced points; 0 gives an empty table
};

struct Config {
  int d = 2;
  int L = 3;
  int J = 3;
  int M = 0;  ///< 0 means 4 L^{J+1}
  double alpha = 1.0;
  double m2 = 1.0;
  std::string strategy = "cheb-exact";
  QuadratureSpec quad;
  int p_max = 2;
  std::vector<int> r_list{1, 2, 3};
  std::uint64_t seed = 42;
  std::size_t n = 10000;
  std::string out_dir = "frd_out";
  TGrid t_grid;
  int workers = 0;        ///< 0 leaves FRD_WORKERS alone
  bool cauchy = false;    ///< verify: also run the Cauchy check (rebuilds scales)
  std::size_t save = 1;   ///< sample: number of total fields written to disk

  int side() const;
};

/// Reads a config document; unknown keys and wrong types raise DomainError naming the field.
Config config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Config& c);

/// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frd::cli
