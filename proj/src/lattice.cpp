#include "frd/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "frd/error.hpp"
#include "frd/fft.hpp"

namespace frd {

Spacing Spacing::inverse_power(int base, int exponent) {
  std::int64_t den = 1;
  for (int i = 0; i < exponent; ++i) den *= base;
  return {1, den};
}

TorusGeometry::TorusGeometry(int dim, int base, int depth, int side, Spacing spacing)
    : dim_(dim), base_(base), depth_(depth), side_(side), spacing_(spacing) {
  if (dim < 1) throw DomainError("dimension d must be >= 1, got " + std::to_string(dim));
  if (base < 2) throw DomainError("scale base L must be >= 2, got " + std::to_string(base));
  if (depth < 0) throw DomainError("depth J must be >= 0, got " + std::to_string(depth));
  if (spacing.num <= 0 || spacing.den <= 0) throw DomainError("spacing must be positive");
  double top = std::pow(static_cast<double>(base), depth + 1);
  if (static_cast<double>(side) < 4.0 * top)
    throw DomainError("side M = " + std::to_string(side) + " is below the half-period guard 4*L^(J+1) = " +
                      std::to_string(static_cast<long long>(4.0 * top)));
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(side);
}

bool TorusGeometry::base_is_power_of_three() const noexcept {
  int b = base_;
  while (b % 3 == 0) b /= 3;
  return b == 1;
}

std::vector<std::string> TorusGeometry::warnings() const {
  std::vector<std::string> out;
  if (!base_is_power_of_three())
    out.push_back("scale base L = " + std::to_string(base_) +
                  " is not a power of 3; regularity constants are only claimed for L = 3^p");
  return out;
}

TorusGeometry TorusGeometry::with_spacing(Spacing s) const {
  TorusGeometry g = *this;
  if (s.num <= 0 || s.den <= 0) throw DomainError("spacing must be positive");
  g.spacing_ = s;
  return g;
}

TorusGeometry TorusGeometry::with_scales(int base, int depth) const {
  return TorusGeometry(dim_, base, depth, side_, spacing_);
}

double TorusGeometry::declared_range(int j) const {
  return std::pow(static_cast<double>(base_), j + 1);
}

double TorusGeometry::min_positive_symbol() const {
  return 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi / side_));
}

void TorusGeometry::offset_of(std::size_t index, std::span<int> offset) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    offset[static_cast<std::size_t>(a)] = minimal_image(static_cast<int>(index % side_));
    index /= side_;
  }
}

std::size_t TorusGeometry::index_of(std::span<const int> offset) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) idx = idx * side_ + static_cast<std::size_t>(wrap(offset[a]));
  return idx;
}

std::size_t TorusGeometry::reflected_index(std::size_t index) const {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    std::size_t c = index % side_;
    index /= side_;
    out += ((side_ - c) % side_) * stride;
    stride *= side_;
  }
  return out;
}

double TorusGeometry::distance(std::size_t index) const {
  double r2 = 0.0;
  for (int a = dim_ - 1; a >= 0; --a) {
    double c = minimal_image(static_cast<int>(index % side_));
    index /= side_;
    r2 += c * c;
  }
  return std::sqrt(r2);
}

GridFunction::GridFunction(TorusGeometry geometry, std::vector<double> values)
    : geometry_(geometry), values_(std::make_shared<const std::vector<double>>(std::move(values))) {
  if (values_->size() != geometry_.size())
    throw DomainError("grid shape mismatch: " + std::to_string(values_->size()) + " values for " +
                      std::to_string(geometry_.size()) + " sites");
}

double GridFunction::at(std::span<const int> offset) const {
  return (*values_)[geometry_.index_of(offset)];
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : *values_) m = std::max(m, std::abs(v));
  return m;
}

SpectralMultiplier::SpectralMultiplier(TorusGeometry geometry, std::vector<double> values)
    : geometry_(geometry), values_(std::make_shared<const std::vector<double>>(std::move(values))) {
  if (values_->size() != geometry_.size()) throw DomainError("multiplier shape mismatch");
}

SpectralMultiplier SpectralMultiplier::from_symbol(const TorusGeometry& geometry,
                                                   const std::function<double(double)>& fn) {
  const int d = geometry.dim();
  const int m = geometry.side();
  const int folded = m / 2 + 1;
  std::vector<double> axis_symbol(static_cast<std::size_t>(folded));
  for (int n = 0; n < folded; ++n)
    axis_symbol[n] = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * n / m));

  std::vector<double> out(geometry.size());
  std::vector<int> n(static_cast<std::size_t>(d), 0);
  std::vector<int> image(static_cast<std::size_t>(d));
  // Visit each folded mode once, then scatter to its reflections n_a -> M - n_a.
  while (true) {
    double lambda = 0.0;
    for (int a = 0; a < d; ++a) lambda += axis_symbol[n[a]];
    const double value = fn(lambda);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      bool valid = true;
      for (int a = 0; a < d; ++a) {
        if (mask & (1u << a)) {
          if (n[a] == 0 || 2 * n[a] == m) { valid = false; break; }
          image[a] = m - n[a];
        } else {
          image[a] = n[a];
        }
      }
      if (!valid) continue;
      std::size_t idx = 0;
      for (int a = 0; a < d; ++a) idx = idx * m + static_cast<std::size_t>(image[a]);
      out[idx] = value;
    }
    int a = d - 1;
    while (a >= 0 && ++n[a] == folded) n[a--] = 0;
    if (a < 0) break;
  }
  return SpectralMultiplier(geometry, std::move(out));
}

double SpectralMultiplier::min() const { return *std::min_element(values_->begin(), values_->end()); }
double SpectralMultiplier::max() const { return *std::max_element(values_->begin(), values_->end()); }

Kernel::Kernel(GridFunction grid) : grid_(std::move(grid)), cache_(std::make_shared<Cache>()) {}

Kernel Kernel::symmetrized(const GridFunction& f) {
  const auto& g = f.geometry();
  std::vector<double> out(g.size());
  auto v = f.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (v[i] + v[g.reflected_index(i)]);
  return Kernel(GridFunction(g, std::move(out)));
}

Kernel Kernel::from_even(TorusGeometry geometry, std::vector<double> values, double tol) {
  GridFunction f(geometry, std::move(values));
  const double sup = f.sup_norm();
  double odd = 0.0;
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) odd = std::max(odd, std::abs(v[i] - v[geometry.reflected_index(i)]));
  if (odd > 2.0 * tol * std::max(sup, std::numeric_limits<double>::min()))
    throw DomainError("kernel is not even: odd part " + std::to_string(0.5 * odd) + " vs sup " + std::to_string(sup));
  return symmetrized(f);
}

Kernel Kernel::delta(const TorusGeometry& geometry) {
  std::vector<double> v(geometry.size(), 0.0);
  v[0] = 1.0;
  return Kernel(GridFunction(geometry, std::move(v)));
}

Kernel Kernel::zero(const TorusGeometry& geometry) {
  return Kernel(GridFunction(geometry, std::vector<double>(geometry.size(), 0.0)));
}

const SpectralMultiplier& Kernel::multiplier() const {
  std::call_once(cache_->once, [this] {
    cache_->multiplier = std::make_unique<SpectralMultiplier>(
        geometry(), fft::even_forward(geometry(), values()));
  });
  return *cache_->multiplier;
}

Kernel Kernel::scaled(double factor) const {
  std::vector<double> v(values().begin(), values().end());
  for (double& x : v) x *= factor;
  return Kernel(GridFunction(geometry(), std::move(v)));
}

Kernel Kernel::with_geometry(const TorusGeometry& geometry) const {
  if (geometry.size() != this->geometry().size() || geometry.dim() != this->geometry().dim())
    throw DomainError("geometry change must keep the grid shape");
  Kernel k(GridFunction(geometry, std::vector<double>(values().begin(), values().end())));
  return k;
}

namespace {

Kernel combine(const Kernel& a, const Kernel& b, double sign) {
  if (a.values().size() != b.values().size()) throw DomainError("kernel shape mismatch");
  std::vector<double> v(a.values().begin(), a.values().end());
  auto bv = b.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * bv[i];
  return Kernel::symmetrized(GridFunction(a.geometry(), std::move(v)));
}

}  // namespace

Kernel operator+(const Kernel& a, const Kernel& b) { return combine(a, b, 1.0); }
Kernel operator-(const Kernel& a, const Kernel& b) { return combine(a, b, -1.0); }

double symbol(std::span<const double> k) {
  double s = 0.0;
  for (double ki : k) s += 2.0 * (1.0 - std::cos(ki));
  return s;
}

SpectralMultiplier to_multiplier(const Kernel& kernel) { return kernel.multiplier(); }

Kernel from_multiplier(const SpectralMultiplier& multiplier) {
  return Kernel::symmetrized(
      GridFunction(multiplier.geometry(), fft::even_inverse(multiplier.geometry(), multiplier.values())));
}

GridFunction forward_derivative(const GridFunction& f, int axis, int order, double increment) {
  const auto& g = f.geometry();
  if (axis < 0 || axis >= g.dim())
    throw DomainError("invalid axis " + std::to_string(axis) + " for dimension " + std::to_string(g.dim()));
  if (order < 0) throw DomainError("derivative order must be >= 0");
  if (!(increment > 0.0) || std::abs(increment - g.spacing().value()) > 1e-12 * g.spacing().value())
    throw DomainError("forward derivative increment must equal the lattice spacing");

  std::vector<double> cur(f.values().begin(), f.values().end());
  if (order == 0) return GridFunction(g, std::move(cur));

  const std::size_t m = static_cast<std::size_t>(g.side());
  std::size_t stride = 1;
  for (int a = g.dim() - 1; a > axis; --a) stride *= m;
  const std::size_t block = stride * m;
  const double inv = 1.0 / increment;

  std::vector<double> next(cur.size());
  for (int p = 0; p < order; ++p) {
    for (std::size_t base = 0; base < cur.size(); base += block) {
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t cn = (c + 1 == m) ? 0 : c + 1;
        const double* src = cur.data() + base + c * stride;
        const double* fwd = cur.data() + base + cn * stride;
        double* dst = next.data() + base + c * stride;
        for (std::size_t r = 0; r < stride; ++r) dst[r] = (fwd[r] - src[r]) * inv;
      }
    }
    cur.swap(next);
  }
  return GridFunction(g, std::move(cur));
}

SupportRadius support_radius(const GridFunction& f, double tol) {
  if (tol < 0.0) throw DomainError("support tolerance must be >= 0");
  const double sup = f.sup_norm();
  if (sup == 0.0) return {0.0, true};
  const double threshold = tol * sup;
  const auto& g = f.geometry();
  double r = 0.0;
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > threshold) r = std::max(r, g.distance(i));
  return {r, false};
}

double min_multiplier(const Kernel& kernel) { return kernel.multiplier().min(); }

double relative_sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("shape mismatch in sup distance");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    ref = std::max(ref, std::abs(b[i]));
  }
  return diff / std::max(ref, std::numeric_limits<double>::min());
}

}  // namespace frd
