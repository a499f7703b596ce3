#pragma once

// Chebyshev series on [-1, 1] and their exact realization as lattice kernels:
// a degree-N polynomial in the averaging operator P = 1 - (-Delta)/(2d)
// is supported in |x|_1 <= N.

#include <functional>
#include <span>
#include <vector>

#include "frd/lattice.hpp"

namespace frd {

class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  explicit ChebyshevSeries(std::vector<double> coefficients);

  /// First-kind nodes cos(pi (p + 1/2) / P), p = 0..P-1.
  static std::vector<double> nodes(std::size_t count);
  /// Interpolant of degree count-1 through values at nodes(count); exact for polynomials of that degree.
  static ChebyshevSeries from_node_values(std::span<const double> values);
  static ChebyshevSeries interpolate(const std::function<double(double)>& f, std::size_t degree);

  std::size_t degree() const noexcept { return a_.empty() ? 0 : a_.size() - 1; }
  std::span<const double> coefficients() const noexcept { return a_; }
  double operator()(double x) const;

 private:
  std::vector<double> a_;
};

/// Kernel of sum_n a_n T_n(P) on the torus, computed by a position-space
/// Clenshaw recurrence on a box of radius degree(); values outside
/// |x|_1 <= degree are exactly zero. Requires 2 * degree + 1 <= M.
Kernel realize_on_lattice(const ChebyshevSeries& series, const TorusGeometry& geometry);

/// Multiplier of the same operator: sum_n a_n T_n(1 - lambda(k) / (2d)).
SpectralMultiplier chebyshev_multiplier(const ChebyshevSeries& series, const TorusGeometry& geometry);

}  // namespace frd
