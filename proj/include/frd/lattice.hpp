#pragma once

// Torus lattice geometry, grid functions, even kernels and their Fourier
// multipliers, plus the measurement primitives used by every other module.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace frd {

/// Lattice spacing num/den; 1 for Z^d, L^{-j} for the j-th rescaled view.
struct Spacing {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  static Spacing inverse_power(int base, int exponent);
  bool operator==(const Spacing&) const = default;
};

/// Periodic cubic lattice of side M in d dimensions, carrying the scale
/// base L and depth J of the decompositions that live on it.
class TorusGeometry {
 public:
  TorusGeometry(int dim, int base, int depth, int side, Spacing spacing = {});

  int dim() const noexcept { return dim_; }
  int base() const noexcept { return base_; }
  int depth() const noexcept { return depth_; }
  int side() const noexcept { return side_; }
  Spacing spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return size_; }
  double half_period() const noexcept { return 0.5 * side_; }

  bool base_is_power_of_three() const noexcept;
  std::vector<std::string> warnings() const;

  TorusGeometry with_spacing(Spacing s) const;
  TorusGeometry with_scales(int base, int depth) const;

  /// L^{j+1}, the finite range of the j-th unrescaled fluctuation covariance.
  double declared_range(int j) const;

  /// Smallest nonzero value of the Laplacian symbol on this torus.
  double min_positive_symbol() const;

  int minimal_image(int i) const noexcept { return i <= side_ / 2 ? i : i - side_; }
  int wrap(long i) const noexcept {
    long r = i % side_;
    return static_cast<int>(r < 0 ? r + side_ : r);
  }

  void offset_of(std::size_t index, std::span<int> offset) const;
  std::size_t index_of(std::span<const int> offset) const;
  /// Index of -x for the site with index `index`.
  std::size_t reflected_index(std::size_t index) const;
  /// Euclidean minimal-image distance of a site from the origin, lattice units.
  double distance(std::size_t index) const;

  bool operator==(const TorusGeometry&) const = default;

 private:
  int dim_;
  int base_;
  int depth_;
  int side_;
  Spacing spacing_;
  std::size_t size_;
};

/// Real values on every site of the torus, row-major (axis 0 slowest).
class GridFunction {
 public:
  GridFunction(TorusGeometry geometry, std::vector<double> values);

  const TorusGeometry& geometry() const noexcept { return geometry_; }
  std::span<const double> values() const noexcept { return *values_; }
  double operator[](std::size_t i) const noexcept { return (*values_)[i]; }
  double at(std::span<const int> offset) const;
  double sup_norm() const;

 private:
  TorusGeometry geometry_;
  std::shared_ptr<const std::vector<double>> values_;
};

/// One real value per Fourier mode k = 2*pi*n/M, same layout as GridFunction.
class SpectralMultiplier {
 public:
  SpectralMultiplier(TorusGeometry geometry, std::vector<double> values);

  /// Fills every mode with F(lambda(k)); F is evaluated once per mode orbit under k -> -k.
  static SpectralMultiplier from_symbol(const TorusGeometry& geometry,
                                        const std::function<double(double)>& fn);

  const TorusGeometry& geometry() const noexcept { return geometry_; }
  std::span<const double> values() const noexcept { return *values_; }
  double operator[](std::size_t i) const noexcept { return (*values_)[i]; }
  double min() const;
  double max() const;

 private:
  TorusGeometry geometry_;
  std::shared_ptr<const std::vector<double>> values_;
};

/// Even, real, translation-invariant kernel K(x - y). Evenness is exact:
/// every constructor symmetrizes. The multiplier is computed once on demand.
class Kernel {
 public:
  /// K(x) = (f(x) + f(-x)) / 2.
  static Kernel symmetrized(const GridFunction& f);
  /// Rejects values whose odd part exceeds `tol` times the sup-norm.
  static Kernel from_even(TorusGeometry geometry, std::vector<double> values, double tol = 1e-10);
  static Kernel delta(const TorusGeometry& geometry);
  static Kernel zero(const TorusGeometry& geometry);

  const TorusGeometry& geometry() const noexcept { return grid_.geometry(); }
  const GridFunction& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return grid_.values(); }
  double operator[](std::size_t i) const noexcept { return grid_[i]; }
  double at(std::span<const int> offset) const { return grid_.at(offset); }
  double sup_norm() const { return grid_.sup_norm(); }

  const SpectralMultiplier& multiplier() const;

  Kernel scaled(double factor) const;
  Kernel with_geometry(const TorusGeometry& geometry) const;
  friend Kernel operator+(const Kernel& a, const Kernel& b);
  friend Kernel operator-(const Kernel& a, const Kernel& b);

 private:
  explicit Kernel(GridFunction grid);

  struct Cache {
    std::once_flag once;
    std::unique_ptr<SpectralMultiplier> multiplier;
  };
  GridFunction grid_;
  std::shared_ptr<Cache> cache_;
};

/// sum_i 2 (1 - cos k_i); k components in [-pi, pi).
double symbol(std::span<const double> k);

SpectralMultiplier to_multiplier(const Kernel& kernel);
Kernel from_multiplier(const SpectralMultiplier& multiplier);

/// p-fold forward difference (f(x + eps e_axis) - f(x)) / eps; eps must equal the spacing.
GridFunction forward_derivative(const GridFunction& f, int axis, int order, double increment);

struct SupportRadius {
  double radius = 0.0;  ///< largest |x| with |K(x)| > tol * sup|K|
  bool all_zero = false;
};

/// Euclidean minimal-image support radius in lattice units; tol = 0 means exact support.
SupportRadius support_radius(const GridFunction& f, double tol);

/// min_k K^(k); nonnegative iff the kernel is positive semidefinite.
double min_multiplier(const Kernel& kernel);

/// Largest |a - b| over sites divided by max(sup|b|, tiny).
double relative_sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace frd
