#include "frd/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace frd::fft {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealTransform::RealTransform(const TorusGeometry& geometry)
    : geometry_(geometry), real_size_(geometry.size()) {
  const int d = geometry.dim();
  const int m = geometry.side();
  half_size_ = real_size_ / static_cast<std::size_t>(m) * static_cast<std::size_t>(m / 2 + 1);
  std::vector<int> dims(static_cast<std::size_t>(d), m);

  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(real_size_);
  auto* half = fftw_alloc_complex(half_size_);
  half_ = half;
  if (real_ == nullptr || half == nullptr) throw std::bad_alloc();
  forward_plan_ = fftw_plan_dft_r2c(d, dims.data(), real_, half, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_c2r(d, dims.data(), half, real_, FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr)
    throw std::runtime_error("FFTW planning failed");
}

RealTransform::~RealTransform() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(real_);
  fftw_free(half_);
}

std::span<std::complex<double>> RealTransform::half() noexcept {
  return {reinterpret_cast<std::complex<double>*>(half_), half_size_};
}

void RealTransform::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void RealTransform::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

std::pair<std::size_t, bool> RealTransform::half_index(std::size_t full_index) const {
  const int d = geometry_.dim();
  const std::size_t m = static_cast<std::size_t>(geometry_.side());
  const std::size_t mh = m / 2 + 1;
  const std::size_t last = full_index % m;
  const bool conj = last >= mh;
  std::size_t rest = full_index / m;
  // Rebuild the half-grid index from the leading axes (reflected when conjugating).
  std::size_t idx = 0;
  std::size_t stride = mh;
  for (int a = d - 2; a >= 0; --a) {
    std::size_t c = rest % m;
    rest /= m;
    if (conj) c = (m - c) % m;
    idx += c * stride;
    stride *= m;
  }
  idx += conj ? (m - last) % m : last;
  return {idx, conj};
}

std::vector<double> even_forward(const TorusGeometry& geometry, std::span<const double> values) {
  if (values.size() != geometry.size()) throw std::invalid_argument("shape mismatch in forward transform");
  RealTransform t(geometry);
  std::copy(values.begin(), values.end(), t.real().begin());
  t.forward();
  std::vector<double> out(geometry.size());
  auto half = t.half();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = half[t.half_index(i).first].real();
  return out;
}

std::vector<double> even_inverse(const TorusGeometry& geometry, std::span<const double> multiplier) {
  if (multiplier.size() != geometry.size()) throw std::invalid_argument("shape mismatch in inverse transform");
  RealTransform t(geometry);
  auto half = t.half();
  const std::size_t m = static_cast<std::size_t>(geometry.side());
  const std::size_t mh = m / 2 + 1;
  for (std::size_t i = 0; i < multiplier.size(); ++i) {
    const std::size_t last = i % m;
    if (last < mh) half[(i / m) * mh + last] = {multiplier[i], 0.0};
  }
  t.backward();
  const double norm = 1.0 / static_cast<double>(geometry.size());
  std::vector<double> out(t.real().begin(), t.real().end());
  for (double& v : out) v *= norm;
  return out;
}

}  // namespace frd::fft
