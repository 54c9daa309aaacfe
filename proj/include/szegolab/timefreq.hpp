#pragma once

// Windows, cross-Wigner distributions, half-plane profiles Q_omega and the
// fractional Fourier transform in the Hermite eigenbasis.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "szegolab/fft.hpp"
#include "szegolab/grid.hpp"

namespace szl {

struct Window {
  std::function<cplx(double)> eval;
  double l2_norm = 1.0;
  /// |phi(x)| < 1e-16 for |x| > decay_hint.
  double decay_hint = 9.0;
  std::string name;

  cplx operator()(double x) const { return eval(x); }
};

/// pi^{-1/4} exp(-x^2/2).
Window gaussian_window();
/// Normalised Hermite function h_k.
Window hermite_window(int k);
/// Window from uniform samples x_i = x0 + i dx (8-point Lagrange, zero outside).
Window sampled_window(double x0, double dx, std::vector<cplx> values, std::string name = "samples");

/// ||phi||_2 by trapezoid quadrature on [-decay_hint, decay_hint].
double l2_norm(const Window& phi);

/// Convolution weight on phase space. Holds grid samples (with 8-point tensor
/// interpolation) and optionally a closed form that takes precedence.
struct PhaseWeight {
  GridSpec grid;
  std::vector<cplx> samples;
  std::function<cplx(double, double)> closed_form;
  cplx integral{1.0, 0.0};
  /// int |z|^k |W(z)| dz for k = 0, 1, 2.
  std::array<double, 3> moments{};
  bool real_valued = true;
  /// |W| is negligible beyond this radius.
  double decay_radius = 8.0;
  std::string provenance;

  cplx operator()(double x, double xi) const;
};

/// Samples of the cross-Wigner distribution
///   W(x, xi) = (2 pi)^{-1} int exp(-i t xi) phi2(x + t/2) conj(phi1(x - t/2)) dt
/// on `grid`, one FFT in t per x. With normalise = true the samples are
/// divided by their integral <phi2, phi1>. Throws GridTooCoarse when either
/// the t-window or the xi-range leaves more than 1e-10 of the peak at its edge.
PhaseWeight wigner(const Window& phi2, const Window& phi1, const GridSpec& grid, bool normalise = false);

/// Grid wide enough for both windows' decay with 512 samples per axis.
GridSpec default_wigner_grid(const Window& phi2, const Window& phi1);

/// Closed-form Wigner distribution of the Gaussian window, exp(-|z|^2)/pi.
PhaseWeight gaussian_phase_weight();

struct LambdaGrid {
  double lo = -8.0;
  double hi = 8.0;
  int intervals = 4096;  // step 1/256 on [-8, 8]

  double step() const { return (hi - lo) / intervals; }
  double at(int i) const { return lo + i * step(); }
  int size() const { return intervals + 1; }
};

struct ProfileQ {
  Point omega{1.0, 0.0};
  LambdaGrid grid;
  std::vector<cplx> values;
  /// |Q - Q(-inf)| and |Q - Q(+inf)| stay below 1e-12 beyond +-tail_clamp.
  double tail_clamp = 8.0;
  cplx limit_minus{0.0, 0.0};
  cplx limit_plus{1.0, 0.0};

  /// Cubic interpolation on the grid, tail limits outside it.
  cplx operator()(double lambda) const;
  double max_imag() const;
};

/// Q_omega(lambda) = integral of W over {z . omega <= lambda}: Radon
/// projection along omega-perp, then cumulative quadrature in lambda.
ProfileQ profile_q_halfplane(const PhaseWeight& W, Point omega, const LambdaGrid& lambdas = {});

/// Coefficients <phi, h_k> for k < K by trapezoid quadrature.
std::vector<cplx> hermite_coefficients(const Window& phi, int K);

/// F^omega phi: Hermite coefficient k picks up exp(-i k theta), theta the
/// polar angle of omega. (1,0) is the identity, (0,1) the unitary Fourier
/// transform with kernel exp(-i x xi). Throws BasisTooSmall when the last
/// coefficients exceed 1e-10.
Window frft(const Window& phi, Point omega, int K = 256);

/// Q_omega(lambda) = int_{-inf}^{lambda} F^omega phi2 conj(F^omega phi1).
ProfileQ profile_q_frft(const Window& phi2, const Window& phi1, Point omega,
                        const LambdaGrid& lambdas = {}, int K = 256);

/// g(delta) = |{lambda <= 0 : Q > delta}| - |{lambda >= 0 : Q < delta}|.
/// Throws ComplexProfile for non-real Q and FlatCrossing when Q lingers
/// within 1e-9 of delta.
double counting_profile_g(const ProfileQ& Q, double delta);

/// -Q^{-1}(delta) by bisection; meaningful for monotone Q.
double counting_profile_g_monotone(const ProfileQ& Q, double delta);

}  // namespace szl
