#pragma once

// Kernel files: <stem>.bin holds raw little-endian doubles in row-major order,
// <stem>.json the sidecar {d, L, J, M, spacing: [num, den], role}.

#include <filesystem>
#include <string>

#include "frd/lattice.hpp"

namespace frd::io {

struct StoredGrid {
  GridFunction grid;
  std::string role;
};

void write_grid(const std::filesystem::path& stem, const GridFunction& grid, const std::string& role);
StoredGrid read_grid(const std::filesystem::path& stem);

/// One row per distinct distance up to M/2: distance, mean, min, max over sites at that distance.
void write_radial_profile(const std::filesystem::path& csv, const GridFunction& grid);

std::filesystem::path bin_path(const std::filesystem::path& stem);
std::filesystem::path sidecar_path(const std::filesystem::path& stem);

}  // namespace frd::io
