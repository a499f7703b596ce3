#pragma once

// Compactly supported window omega on [-1, 1] with a nonnegative Fourier
// transform, and the band coefficients it induces. Integrating
// W_t(phi) = sum_n omega(n/t) e^{i n phi} over t in [0, inf) gives
// C / (4 sin^2(phi/2)); cutting the t-axis into bands yields trigonometric
// polynomials of degree < t_hi, each of them nonnegative.

#include <vector>

namespace frd {

class BSplineWindow {
 public:
  /// Centered cardinal B-spline of even order m, rescaled to support [-1, 1] and omega(0) = 1.
  explicit BSplineWindow(int order = 6);

  int order() const noexcept { return order_; }

  double omega(double u) const;
  /// int omega(u) e^{-i xi u} du = (2 / (m B_m(0))) sinc(xi/m)^m >= 0
  double omega_hat(double xi) const;
  /// int_v^1 omega(u) / u^2 du for v > 0 (zero for v >= 1), exact piecewise integration.
  double G(double v) const;
  /// int_0^inf u omega_hat(u) du = -2 int_0^1 omega'(u) / u du, exact.
  double C() const noexcept { return C_; }

  /// g(n) = int_{t_lo}^{t_hi} omega(n / t) dt for n = 0 .. ceil(t_hi) - 1 (t_lo may be 0).
  std::vector<double> band_coefficients(double t_lo, double t_hi) const;

 private:
  double piece_poly(int k, double u) const;

  int order_;
  double b0_;
  // polynomial coefficients in u on [k/h, (k+1)/h], h = m/2
  std::vector<std::vector<double>> pieces_;
  std::vector<double> piece_tail_;  // int_{u_{k+1}}^1 omega/u^2
  double C_;
};

}  // namespace frd
