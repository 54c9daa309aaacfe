#pragma once

// Phase-space symbols on uniform grids: dilation, smoothed cutoffs
// W * (a chi_Omega)_r, Moyal bracket terms and norm estimates.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "szegolab/fft.hpp"
#include "szegolab/geometry.hpp"
#include "szegolab/grid.hpp"
#include "szegolab/timefreq.hpp"

namespace szl {

using SymbolFn = std::function<cplx(const Point&)>;
using RealFn = std::function<double(const Point&)>;

struct SymbolGrid {
  GridSpec grid;
  std::vector<cplx> values;
  std::string meta;
  /// Largest |value| on the outermost ring of samples.
  double border_level = 0.0;

  cplx& at(int i, int j) { return values[grid.index(i, j)]; }
  const cplx& at(int i, int j) const { return values[grid.index(i, j)]; }
  /// 8-point tensor Lagrange interpolation; zero outside the grid.
  cplx operator()(double x, double xi) const;
  /// h^2 * sum of samples.
  cplx integral() const;
  double max_imag() const;
};

/// p_r(z) = p(z / r).
SymbolFn dilate(SymbolFn p, double r);
SymbolFn dilate(const SymbolGrid& p, double r);

/// Samples of an arbitrary closure on `grid`.
SymbolGrid sample_symbol(const SymbolFn& p, const GridSpec& grid, std::string meta = "sampled");

enum class SymbolSampling {
  /// Smooth partition of unity: grid samples in the interior, a
  /// boundary-fitted quadrature in a band along the rim.
  kBoundaryFitted,
  /// chi_Omega sampled at grid nodes.
  kPointwise,
};

struct SmoothingOptions {
  SymbolSampling sampling = SymbolSampling::kBoundaryFitted;
  /// Width of the erfc ramp separating interior and rim band.
  double ramp_width = 0.25;
};

/// Default grid: 1024 samples per axis, half extent r * bounding_radius + 10.
GridSpec default_symbol_grid(const Domain& dom, double r);

/// q = W * (b chi_{r Omega}) with b = a(. / r), by zero-padded FFT
/// convolution. The domain must be star-shaped about its centre. Throws
/// GridTooSmall when |q| exceeds 1e-10 on the border of the output grid.
SymbolGrid smoothed_symbol(const PhaseWeight& W, const RealFn& a, const Domain& dom, double r,
                           const GridSpec& grid, const SmoothingOptions& opts = {});

/// j = 0: p q. j = 1: (i/2)(d_x p d_xi q - d_xi p d_x q) by spectral
/// differentiation.
SymbolGrid moyal_term(const SymbolGrid& p, const SymbolGrid& q, int j);

/// d/dx (axis 0) or d/dxi (axis 1) by FFT.
SymbolGrid spectral_derivative(const SymbolGrid& p, int axis);

struct SymbolNorms {
  /// Order: q, d_x q, d_xi q, d_xx q, d_xxi q, d_xixi q.
  static constexpr std::array<const char*, 6> kLabels{"q", "dx", "dxi", "dxx", "dxxi", "dxixi"};
  std::array<double, 6> sup{};
  std::array<double, 6> l1{};
};

SymbolNorms symbol_sup_and_l1(const SymbolGrid& q);

/// Row-major CSV dump with a GridSpec header line, for debugging.
void write_symbol_csv(const SymbolGrid& q, std::ostream& os);

}  // namespace szl
