#pragma once

// Two-term Szego coefficients A0, A1 for tr f(T_r) and eigenvalue counts,
// and least-squares extraction of the same coefficients from r-sweeps.

#include <string>
#include <vector>

#include "szegolab/geometry.hpp"
#include "szegolab/quantize.hpp"
#include "szegolab/symbolics.hpp"
#include "szegolab/timefreq.hpp"

namespace szl {

/// Edge profiles Q_omega for every direction omega, from either route.
/// Profiles of a rotation-invariant weight are detected on four directions
/// (tolerance 1e-9) and computed once; otherwise a table over 64 directions
/// is interpolated periodically in the angle.
class EdgeProfiles {
 public:
  using Builder = std::function<ProfileQ(Point)>;

  explicit EdgeProfiles(Builder build, int table_size = 64);
  static EdgeProfiles from_weight(const PhaseWeight& W, const LambdaGrid& grid = {});
  static EdgeProfiles from_windows(const Window& phi2, const Window& phi1, const LambdaGrid& grid = {});

  bool radial() const { return radial_; }
  ProfileQ at(Point omega) const;
  const LambdaGrid& grid() const { return grid_; }

 private:
  bool radial_ = false;
  LambdaGrid grid_;
  std::vector<ProfileQ> table_;
};

/// (2 pi)^{-1} int_Omega f(a(z)) dz by polar quadrature about the star
/// centre: trapezoid along the boundary, Gauss-Legendre along rays.
double coeff_A0(const RealFn& a, const Domain& dom, const SpectralFunction& f, int boundary_nodes = 1024);

/// (2 pi)^{-1} int_{dOmega} int (f(Q a(u)) - Q f(a(u))) dlambda dmu(u), Q
/// the profile in the inward normal direction. The lambda integral runs over
/// the profile grid; the size of the integrand at its ends is added to
/// *tail_bound when given.
double coeff_A1(const RealFn& a, const Domain& dom, const SpectralFunction& f, const EdgeProfiles& Q,
                double* tail_bound = nullptr, int boundary_nodes = 1024);

/// The same coefficient with Q - chi_[0, inf) replaced by a step at
/// lambda = e . n(u). Differs from coeff_A1 by
/// (2 pi)^{-1} int f(a) (e - m) . n dmu with m the first moment of W, which
/// vanishes for constant a.
double coeff_A1_step(const RealFn& a, const Domain& dom, const SpectralFunction& f, const EdgeProfiles& Q,
                     Point offset, int boundary_nodes = 1024);

/// (2 pi)^{-1} int_{dOmega} g_{n(u)}(delta) dmu(u) for a = 1, f the
/// indicator of [delta, inf).
double coeff_A1_counting(const Domain& dom, const EdgeProfiles& Q, double delta, int boundary_nodes = 1024);

struct TwoTerm {
  double A0 = 0.0;
  double A1 = 0.0;
  double tail_bound = 0.0;
  std::string route;

  double operator()(double r) const { return A0 * r * r + A1 * r; }
};

/// A0 and A1 for the pair (a, f). A threshold f with unit_symbol set uses
/// the counting form of A1; everything else uses coeff_A1.
TwoTerm two_term(const RealFn& a, bool unit_symbol, const Domain& dom, const SpectralFunction& f,
                 const EdgeProfiles& Q);

double predict(const TwoTerm& c, double r);

struct AsymptoticsReport {
  std::vector<double> r_values;
  std::vector<double> measured;
  std::vector<double> predicted;
  /// measured - (A0 r^2 + A1 r)
  std::vector<double> residuals;
  double predicted_A0 = 0.0;
  double predicted_A1 = 0.0;
  double fitted_c2 = 0.0;
  double fitted_c1 = 0.0;
  double fitted_c0 = 0.0;
  /// |fitted - predicted| / |predicted|, or the absolute error when the
  /// prediction is zero.
  double rel_err_c2 = 0.0;
  double rel_err_c1 = 0.0;
};

/// Least squares c2 r^2 + c1 r + c0. Needs at least four distinct r and
/// throws IllConditionedFit when max r / min r < 2.
AsymptoticsReport fit_and_compare(const std::vector<double>& r_values, const std::vector<double>& measured,
                                  double A0, double A1);

}  // namespace szl
