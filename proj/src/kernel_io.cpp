#include "frd/kernel_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <json.hpp>
#include <vector>

#include "frd/error.hpp"

namespace frd::io {

using nlohmann::json;

namespace {

void to_little_endian(std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::big) {
    for (double& x : v) {
      unsigned char b[8];
      std::memcpy(b, &x, 8);
      std::reverse(b, b + 8);
      std::memcpy(&x, b, 8);
    }
  }
}

}  // namespace

std::filesystem::path bin_path(const std::filesystem::path& stem) {
  auto p = stem;
  p += ".bin";
  return p;
}

std::filesystem::path sidecar_path(const std::filesystem::path& stem) {
  auto p = stem;
  p += ".json";
  return p;
}

void write_grid(const std::filesystem::path& stem, const GridFunction& grid, const std::string& role) {
  const auto& g = grid.geometry();
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::vector<double> data(grid.values().begin(), grid.values().end());
  to_little_endian(data);
  {
    std::ofstream out(bin_path(stem), std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + bin_path(stem).string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + bin_path(stem).string());
  }
  json side = {{"d", g.dim()},
               {"L", g.base()},
               {"J", g.depth()},
               {"M", g.side()},
               {"spacing", {g.spacing().num, g.spacing().den}},
               {"role", role}};
  std::ofstream out(sidecar_path(stem), std::ios::trunc);
  if (!out) throw IoError("cannot open " + sidecar_path(stem).string() + " for writing");
  out << side.dump(2) << '\n';
}

StoredGrid read_grid(const std::filesystem::path& stem) {
  json side;
  {
    std::ifstream in(sidecar_path(stem));
    if (!in) throw IoError("missing sidecar " + sidecar_path(stem).string());
    try {
      in >> side;
    } catch (const json::exception& e) {
      throw IoError("corrupted sidecar " + sidecar_path(stem).string() + ": " + e.what());
    }
  }
  int d, L, J, M;
  Spacing sp;
  std::string role;
  try {
    d = side.at("d").get<int>();
    L = side.at("L").get<int>();
    J = side.at("J").get<int>();
    M = side.at("M").get<int>();
    const auto& s = side.at("spacing");
    if (!s.is_array() || s.size() != 2) throw IoError("spacing must be [num, den]");
    sp = {s[0].get<std::int64_t>(), s[1].get<std::int64_t>()};
    role = side.at("role").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError("corrupted sidecar " + sidecar_path(stem).string() + ": " + e.what());
  }
  TorusGeometry geom(d, L, J, M, sp);

  std::ifstream in(bin_path(stem), std::ios::binary | std::ios::ate);
  if (!in) throw IoError("missing kernel data " + bin_path(stem).string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != geom.size() * sizeof(double))
    throw IoError("kernel data " + bin_path(stem).string() + " has " + std::to_string(bytes) + " bytes, expected " +
                  std::to_string(geom.size() * sizeof(double)));
  in.seekg(0);
  std::vector<double> data(geom.size());
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed: " + bin_path(stem).string());
  to_little_endian(data);
  return {GridFunction(geom, std::move(data)), role};
}

void write_radial_profile(const std::filesystem::path& csv, const GridFunction& grid) {
  struct Acc {
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    long n = 0;
  };
  const auto& g = grid.geometry();
  std::map<long long, Acc> by_r2;
  std::vector<int> off(g.dim());
  const double limit = g.half_period();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.offset_of(i, off);
    long long r2 = 0;
    for (int c : off) r2 += static_cast<long long>(c) * c;
    if (std::sqrt(static_cast<double>(r2)) > limit) continue;
    auto& a = by_r2[r2];
    a.sum += grid[i];
    a.lo = std::min(a.lo, grid[i]);
    a.hi = std::max(a.hi, grid[i]);
    ++a.n;
  }
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw IoError("cannot open " + csv.string() + " for writing");
  out.precision(17);
  const double h = g.spacing().value();
  out << "distance,value,min,max\n";
  for (const auto& [r2, a] : by_r2)
    out << h * std::sqrt(static_cast<double>(r2)) << ',' << a.sum / a.n << ',' << a.lo << ',' << a.hi << '\n';
}

}  // namespace frd::io
