#include "frd/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "frd/error.hpp"
#include "frd/parallel.hpp"

namespace frd {

ChebyshevSeries::ChebyshevSeries(std::vector<double> coefficients) : a_(std::move(coefficients)) {}

std::vector<double> ChebyshevSeries::nodes(std::size_t count) {
  std::vector<double> x(count);
  for (std::size_t p = 0; p < count; ++p) x[p] = std::cos(std::numbers::pi * (p + 0.5) / count);
  return x;
}

ChebyshevSeries ChebyshevSeries::from_node_values(std::span<const double> values) {
  const std::size_t P = values.size();
  if (P == 0) throw DomainError("no interpolation values");
  std::vector<double> a(P, 0.0);
  // a_n = (2/P) sum_p f_p cos(n theta_p); cos(n theta_p) by the three-term recurrence per node
  for (std::size_t p = 0; p < P; ++p) {
    const double theta = std::numbers::pi * (p + 0.5) / P;
    const double c1 = std::cos(theta);
    double prev = 1.0, cur = c1;
    a[0] += values[p];
    if (P > 1) a[1] += values[p] * cur;
    for (std::size_t n = 2; n < P; ++n) {
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
      a[n] += values[p] * cur;
    }
  }
  for (double& v : a) v *= 2.0 / P;
  a[0] *= 0.5;
  return ChebyshevSeries(std::move(a));
}

ChebyshevSeries ChebyshevSeries::interpolate(const std::function<double(double)>& f, std::size_t degree) {
  auto x = nodes(degree + 1);
  std::vector<double> v(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) v[p] = f(x[p]);
  return from_node_values(v);
}

double ChebyshevSeries::operator()(double x) const {
  if (a_.empty()) return 0.0;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t n = a_.size() - 1; n >= 1; --n) {
    const double b0 = a_[n] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a_[0] + x * b1 - b2;
}

namespace {

// Dense box of side S = 2R + 3 around the origin (one layer of zero padding).
struct Box {
  int d;
  int R;
  std::size_t S;
  std::vector<std::size_t> stride;
  std::size_t center;

  Box(int dim, int radius) : d(dim), R(radius), S(2 * static_cast<std::size_t>(radius) + 3), stride(dim) {
    std::size_t st = 1;
    for (int a = d - 1; a >= 0; --a) {
      stride[a] = st;
      st *= S;
    }
    center = 0;
    for (int a = 0; a < d; ++a) center += (R + 1) * stride[a];
  }
  std::size_t size() const { return stride[0] * S; }
};

// out = 2 P in - out on the cube of radius r (i.e. the Clenshaw step without the a_n delta).
// With final = true: out = P in - out.
void clenshaw_step(const Box& box, int r, const std::vector<double>& in, std::vector<double>& out, double scale) {
  const int d = box.d;
  const double coef = scale / (2.0 * d);
  const std::size_t lo = static_cast<std::size_t>(box.R + 1 - r);
  const std::size_t span = 2 * static_cast<std::size_t>(r) + 1;
  std::size_t rows = 1;
  for (int a = 0; a < d - 1; ++a) rows *= span;
  const std::size_t last = box.stride[d - 1];  // == 1

  auto row = [&](std::size_t q) {
    std::size_t base = 0;
    std::size_t rem = q;
    for (int a = d - 2; a >= 0; --a) {
      base += (lo + rem % span) * box.stride[a];
      rem /= span;
    }
    base += lo * last;
    for (std::size_t c = 0; c < span; ++c) {
      const std::size_t i = base + c;
      double acc = 0.0;
      for (int a = 0; a < d; ++a) acc += in[i + box.stride[a]] + in[i - box.stride[a]];
      out[i] = coef * acc - out[i];
    }
  };
  if (rows * span > (1u << 16)) {
    parallel::parallel_for(rows, row);
  } else {
    for (std::size_t q = 0; q < rows; ++q) row(q);
  }
}

}  // namespace

Kernel realize_on_lattice(const ChebyshevSeries& series, const TorusGeometry& geometry) {
  const auto a = series.coefficients();
  if (a.empty()) return Kernel::zero(geometry);
  const int N = static_cast<int>(series.degree());
  if (2 * N + 1 > geometry.side())
    throw DomainError("polynomial degree " + std::to_string(N) + " does not fit the torus side " +
                      std::to_string(geometry.side()));
  const int d = geometry.dim();
  Box box(d, N);
  std::vector<double> b1(box.size(), 0.0), b2(box.size(), 0.0);
  // b_{N+1} = b_{N+2} = 0; b_n = a_n delta + 2 P b_{n+1} - b_{n+2}, support radius N - n.
  for (int n = N; n >= 1; --n) {
    clenshaw_step(box, N - n, b1, b2, 2.0);
    b2[box.center] += a[n];
    std::swap(b1, b2);
  }
  // result = a_0 delta + P b_1 - b_2
  clenshaw_step(box, N, b1, b2, 1.0);
  b2[box.center] += a[0];

  std::vector<double> out(geometry.size(), 0.0);
  std::vector<int> off(d);
  const std::size_t span = 2 * static_cast<std::size_t>(N) + 1;
  std::size_t cube = 1;
  for (int a2 = 0; a2 < d; ++a2) cube *= span;
  for (std::size_t q = 0; q < cube; ++q) {
    std::size_t rem = q, bi = 0;
    for (int ax = d - 1; ax >= 0; --ax) {
      const int c = static_cast<int>(rem % span);
      rem /= span;
      off[ax] = c - N;
      bi += static_cast<std::size_t>(c + 1) * box.stride[ax];
    }
    const double v = b2[bi];
    if (v != 0.0) out[geometry.index_of(off)] += v;
  }
  return Kernel::symmetrized(GridFunction(geometry, std::move(out)));
}

SpectralMultiplier chebyshev_multiplier(const ChebyshevSeries& series, const TorusGeometry& geometry) {
  const double two_d = 2.0 * geometry.dim();
  return SpectralMultiplier::from_symbol(geometry, [&](double lambda) { return series(1.0 - lambda / two_d); });
}

}  // namespace frd
