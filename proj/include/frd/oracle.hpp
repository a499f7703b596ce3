#pragma once

// Ground-truth resolvent kernels computed directly from their Fourier multipliers.

#include "frd/lattice.hpp"
#include "frd/spectral_weight.hpp"

namespace frd::oracle {

/// (-Delta + s)^{-1}. s = 0 (or -lambda_min < s < 0) needs exclude_zero_mode,
/// which sets the k = 0 multiplier to 0.
Kernel green_laplace(double s, const TorusGeometry& geometry, bool exclude_zero_mode = false);

/// ((-Delta)^{alpha/2} + m^2)^{-1}; m^2 = 0 needs exclude_zero_mode.
Kernel green_fractional(const SpectralParams& params, const TorusGeometry& geometry, bool exclude_zero_mode = false);

struct RepresentationCheck {
  double residual = 0.0;  ///< relative sup-norm
  std::size_t nodes = 0;
  bool pass = false;
};

/// Massless resolvent against (sin(pi a/2)/pi) sum_i w_i s_i^{-a/2} G(., s_i),
/// both with the zero mode removed; passes at 1e-6 relative.
RepresentationCheck m0_representation_check(double alpha, const TorusGeometry& geometry, const QuadratureSpec& quad);

}  // namespace frd::oracle
