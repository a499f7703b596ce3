#include "frd/window.hpp"

#include <cmath>
#include <string>

#include "frd/error.hpp"

namespace frd {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Antiderivative of sum_n c_n u^{n-2}.
double antideriv(const std::vector<double>& c, double u) {
  double a = -c[0] / u + c[1] * std::log(u);
  double p = 1.0;
  for (std::size_t n = 2; n < c.size(); ++n) {
    p *= u;
    a += c[n] * p / static_cast<double>(n - 1);
  }
  return a;
}

// Antiderivative of omega'(u)/u = sum_{n>=1} n c_n u^{n-2}; the c_1 log term is absent on the first piece.
double antideriv_slope(const std::vector<double>& c, double u) {
  double a = c[1] != 0.0 ? c[1] * std::log(u) : 0.0;
  double p = 1.0;
  for (std::size_t n = 2; n < c.size(); ++n) {
    p *= u;
    a += static_cast<double>(n) * c[n] * p / static_cast<double>(n - 1);
  }
  return a;
}

}  // namespace

BSplineWindow::BSplineWindow(int order) : order_(order) {
  if (order < 4 || order % 2 != 0) throw DomainError("window order must be even and >= 4, got " + std::to_string(order));
  const int m = order, h = m / 2;
  const double fm = factorial(m - 1);
  b0_ = 0.0;
  for (int i = 0; i < h; ++i) b0_ += (i % 2 ? -1.0 : 1.0) * binom(m, i) * std::pow(h - i, m - 1);
  b0_ /= fm;

  pieces_.assign(h, std::vector<double>(m, 0.0));
  for (int k = 0; k < h; ++k) {
    auto& c = pieces_[k];
    for (int i = 0; i <= std::min(k + h, m); ++i) {
      const double sign = (i % 2 ? -1.0 : 1.0) * binom(m, i);
      for (int n = 0; n < m; ++n)
        c[n] += sign * binom(m - 1, n) * std::pow(static_cast<double>(h), n) * std::pow(static_cast<double>(h - i), m - 1 - n);
    }
    for (double& x : c) x /= fm * b0_;
  }
  pieces_[0][1] = 0.0;  // omega is even and C^1 at the origin

  piece_tail_.assign(h, 0.0);
  for (int k = h - 2; k >= 0; --k) {
    const double a = double(k + 1) / h, b = double(k + 2) / h;
    piece_tail_[k] = piece_tail_[k + 1] + antideriv(pieces_[k + 1], b) - antideriv(pieces_[k + 1], a);
  }

  double slope_integral = 0.0;
  for (int k = 0; k < h; ++k) {
    const double a = double(k) / h, b = double(k + 1) / h;
    slope_integral += antideriv_slope(pieces_[k], b) - (k == 0 ? 0.0 : antideriv_slope(pieces_[k], a));
  }
  C_ = -2.0 * slope_integral;
}

double BSplineWindow::piece_poly(int k, double u) const {
  const auto& c = pieces_[k];
  double r = 0.0;
  for (std::size_t n = c.size(); n-- > 0;) r = r * u + c[n];
  return r;
}

double BSplineWindow::omega(double u) const {
  u = std::abs(u);
  if (u >= 1.0) return 0.0;
  const int h = order_ / 2;
  const int k = std::min(static_cast<int>(u * h), h - 1);
  return piece_poly(k, u);
}

double BSplineWindow::omega_hat(double xi) const {
  const double x = xi / order_;
  const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
  return 2.0 / (order_ * b0_) * std::pow(sinc, order_);
}

double BSplineWindow::G(double v) const {
  if (!(v > 0.0)) throw DomainError("G needs v > 0");
  if (v >= 1.0) return 0.0;
  const int h = order_ / 2;
  const int k = std::min(static_cast<int>(v * h), h - 1);
  const double top = double(k + 1) / h;
  return antideriv(pieces_[k], top) - antideriv(pieces_[k], v) + piece_tail_[k];
}

std::vector<double> BSplineWindow::band_coefficients(double t_lo, double t_hi) const {
  if (!(t_lo >= 0.0) || !(t_hi > t_lo)) throw DomainError("invalid band [t_lo, t_hi]");
  const auto n_max = static_cast<std::size_t>(std::ceil(t_hi));
  std::vector<double> g(n_max, 0.0);
  g[0] = t_hi - t_lo;
  for (std::size_t n = 1; n < n_max; ++n) {
    const double dn = static_cast<double>(n);
    g[n] = dn * (G(dn / t_hi) - (t_lo > 0.0 ? G(dn / t_lo) : 0.0));
  }
  return g;
}

}  // namespace frd
