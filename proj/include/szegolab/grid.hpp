#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace szl {

using Point = std::array<double, 2>;

/// Uniform square grid on [c - L, c + L)^2 with n samples per axis.
/// Sample (i, j) sits at (cx - L + i h, cxi - L + j h), h = 2L/n, so the centre
/// is node n/2. Values are stored row-major with i (the x index) slow.
struct GridSpec {
  Point center{0.0, 0.0};
  double half_extent = 10.0;
  int n = 256;

  double spacing() const { return 2.0 * half_extent / n; }
  double x(int i) const { return center[0] - half_extent + i * spacing(); }
  double xi(int j) const { return center[1] - half_extent + j * spacing(); }
  double x0() const { return center[0] - half_extent; }
  double xi0() const { return center[1] - half_extent; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n + j; }
};

/// Throws InvalidArgument unless n is a power of two >= 8 and L > 0.
void validate(const GridSpec& g);

/// 8-point tensor Lagrange interpolation of row-major samples on g; zero
/// outside the grid.
std::complex<double> interpolate(const GridSpec& g, const std::vector<std::complex<double>>& v, double x,
                                 double xi);

}  // namespace szl
