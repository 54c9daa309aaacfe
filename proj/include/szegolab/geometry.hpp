#pragma once

// Compact planar domains with smooth, counter-clockwise boundary curves.

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "szegolab/grid.hpp"

namespace szl {

/// A compact region with a C^2, 2pi-periodic, counter-clockwise boundary
/// parametrisation. Normals point inward; curvature is positive for convex
/// domains so that the tube Jacobian is 1 - lambda * kappa.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual Point gamma(double s) const = 0;
  virtual Point dgamma(double s) const = 0;
  virtual Point ddgamma(double s) const = 0;
  virtual bool inside(const Point& z) const = 0;
  virtual double bounding_radius() const = 0;
  /// Centre with respect to which the domain is star-shaped.
  virtual Point star_center() const { return {0.0, 0.0}; }
  virtual std::string describe() const = 0;

  Point normal(double s) const;
  double curvature(double s) const;
  double speed(double s) const;

 private:
  friend double tubular_radius(const Domain& dom);
  mutable std::atomic<double> tau_cache_{-1.0};
};

using DomainPtr = std::shared_ptr<const Domain>;

DomainPtr make_disc(double radius, Point center = {0.0, 0.0});
DomainPtr make_ellipse(double a, double b);
/// Radial graph rho(theta) = radius * (1 + eps cos(k theta)).
DomainPtr make_star(double eps, int k, double radius = 1.0);

struct Projection {
  Point u;
  double s = 0.0;
  double lambda = 0.0;
};

/// Positive inside, negative outside.
double signed_distance(const Domain& dom, const Point& z);

/// Throws NotInTube when |signed distance| >= tubular_radius(dom).
Projection nearest_boundary_point(const Domain& dom, const Point& z);

/// Same projection without the tube check; the caller vouches for uniqueness.
Projection project_to_boundary(const Domain& dom, const Point& z);

double curvature_at(const Domain& dom, double s);

/// Lower bound for the reach of the boundary: min of 1/max|kappa| and a
/// pairwise guard inf |y - x|^2 / (2 |(y - x) . n_x|) over 4096 samples, which
/// also catches near self-intersections. Cached per domain instance.
double tubular_radius(const Domain& dom);

/// Periodic trapezoid rule for the boundary integral against arc length.
double boundary_integral(const Domain& dom, const std::function<double(const Point&)>& g,
                         int nodes = 1024);

/// Integral of F over the tube |signed distance| < t via normal coordinates:
/// trapezoid along the boundary, Gauss-Legendre across it.
double tube_integral(const Domain& dom, double t, const std::function<double(const Point&)>& F,
                     int boundary_nodes = 1024);

/// Radial function rho(theta) of a star-shaped domain around star_center(),
/// tabulated and interpolated periodically. Throws NotStarShaped.
class RadialFunction {
 public:
  explicit RadialFunction(const Domain& dom, int table_size = 4096);

  double operator()(double theta) const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::vector<double> table_;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace szl
