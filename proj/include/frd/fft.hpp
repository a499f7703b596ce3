#pragma once

// Thin RAII wrapper over FFTW real transforms on the torus.

#include <complex>
#include <span>
#include <vector>

#include "frd/lattice.hpp"

namespace frd::fft {

/// Forward r2c / backward c2r plans for one geometry. Each instance owns its
/// buffers; use one instance per thread.
class RealTransform {
 public:
  explicit RealTransform(const TorusGeometry& geometry);
  ~RealTransform();
  RealTransform(const RealTransform&) = delete;
  RealTransform& operator=(const RealTransform&) = delete;

  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t half_size() const noexcept { return half_size_; }

  std::span<double> real() noexcept { return {real_, real_size_}; }
  std::span<std::complex<double>> half() noexcept;

  void forward();   ///< real() -> half(), unnormalized
  void backward();  ///< half() -> real(), unnormalized (destroys half())

  /// Full-grid index -> (half-grid index, conjugate?).
  std::pair<std::size_t, bool> half_index(std::size_t full_index) const;

 private:
  TorusGeometry geometry_;
  std::size_t real_size_;
  std::size_t half_size_;
  double* real_ = nullptr;
  void* half_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Multiplier of an even real kernel (imaginary parts are roundoff and dropped).
std::vector<double> even_forward(const TorusGeometry& geometry, std::span<const double> values);

/// Inverse transform of a k -> -k symmetric real multiplier, normalized by 1/M^d.
std::vector<double> even_inverse(const TorusGeometry& geometry, std::span<const double> multiplier);

}  // namespace frd::fft
