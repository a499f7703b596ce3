#pragma once

// Gaussian fields with a prescribed translation-invariant covariance by
// spectral synthesis, driven by counter-based random streams so that every
// (seed, stream, sample index) is reproducible on its own.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "frd/frac_frd.hpp"
#include "frd/lattice.hpp"

namespace frd::sampling {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Stream tag used for remainder fields.
inline constexpr std::uint32_t kRemainderStream = 0xFFFFu;

/// Standard normal per site for (seed, stream, sample).
void white_noise(std::uint64_t seed, std::uint32_t stream, std::uint64_t sample, std::span<double> out);

struct FieldSample {
  GridFunction field;
  std::string label;  ///< "scale j", "remainder" or "total"
  std::uint64_t seed;
  std::uint64_t index;
};

/// sqrt of the kernel multiplier with negative dust (>= -1e-12 max) clipped;
/// refuses materially negative multipliers with ContractViolation.
std::vector<double> sqrt_multiplier(const Kernel& kernel);

/// Fields with covariance K, drawn from stream `stream`.
std::vector<FieldSample> sample_scale(const Kernel& kernel, std::uint64_t seed, std::size_t n, std::uint32_t stream = 0);

/// Per-sample callback for streaming use: fields[j] for j = 0..J is the scale
/// field, fields[J + 1] the remainder field, total their sum. Called from
/// worker threads; each index is visited once.
using SampleVisitor =
    std::function<void(std::size_t index, std::span<const std::vector<double>> fields, std::span<const double> total)>;

/// Independent fields per scale (stream j) and for the remainder; m^2 > 0 only.
void visit_total_samples(const FracDecomposition& dec, std::uint64_t seed, std::size_t n, const SampleVisitor& visit);

std::vector<FieldSample> sample_total(const FracDecomposition& dec, std::uint64_t seed, std::size_t n);

/// mean_z a(z) b(z + x)
double translation_average(const TorusGeometry& g, std::span<const double> a, std::span<const double> b,
                           std::span<const int> offset);

struct CovarianceEstimate {
  std::vector<int> offset;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  ///< zero standard error: the estimate carries no spread information
};

/// From per-sample translation averages c_i: mean and sd(c_i)/sqrt(n).
CovarianceEstimate summarize_products(std::span<const double> c, std::vector<int> offset);

std::vector<CovarianceEstimate> empirical_covariance(std::span<const FieldSample> samples,
                                                     std::span<const std::vector<int>> offsets);

struct SamplerCheck {
  std::string quantity;  ///< "total", "scale j" or "scale j x scale k"
  std::vector<int> offset;
  double expected = 0.0;
  CovarianceEstimate estimate;
  double z = 0.0;  ///< (estimate - expected) / std_error
  bool pass = false;  ///< |z| <= 3 and not degenerate
};

struct SamplerReport {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<SamplerCheck> checks;
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Streams n total fields and compares: total covariance at axis offsets
/// {0, 1, 3, 9} (those inside the torus) with green_fractional; each scale's
/// covariance just beyond its range with 0; adjacent scales' cross-covariance
/// at offset 0 with 0.
SamplerReport check_sampler(const FracDecomposition& dec, std::uint64_t seed, std::size_t n);

}  // namespace frd::sampling
