#pragma once

// Orthogonal-function evaluators and small quadrature/interpolation helpers
// shared by the time-frequency, symbol and quantisation modules.

#include <array>
#include <span>
#include <vector>

namespace szl {

/// Nodes and weights of a composite quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule of the given order on [a, b]. Supported orders: 4, 6, 8,
/// 10, 12, 16, 20.
QuadratureRule gauss_legendre(int order, double a, double b);

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` nodes.
QuadratureRule gauss_legendre_panels(double a, double b, int panels, int order);

/// Normalised Hermite functions h_0..h_{out.size()-1} at x.
///
/// h_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x) exp(-x^2/2). The three-term
/// recurrence runs on a rescaled sequence so the Gaussian seed never
/// underflows before the oscillatory region is reached.
void hermite_functions(double x, std::span<double> out);

double hermite_function(int k, double x);

/// Normalised Laguerre functions of order m at y >= 0:
///   f_k(y) = sqrt(k!/(k+m)!) y^{m/2} exp(-y/2) L_k^{(m)}(y),  k = 0..out.size()-1.
/// Same rescaling strategy as hermite_functions.
void laguerre_functions(int m, double y, std::span<double> out);

/// Interpolation stencil on a uniform grid x_i = origin + i*spacing, i in [0, n).
struct LagrangeStencil {
  static constexpr int kMaxOrder = 12;
  int start = 0;
  int order = 0;
  std::array<double, kMaxOrder> weight{};
};

/// Lagrange stencil of even `order` centred on x. Returns false when x lies
/// outside [origin, origin + (n-1)*spacing].
bool lagrange_stencil(double x, double origin, double spacing, int n, int order,
                      LagrangeStencil& out);

}  // namespace szl
