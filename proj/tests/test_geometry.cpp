#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "szegolab/error.hpp"
#include "szegolab/geometry.hpp"

using namespace szl;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense-grid argmin of |z - gamma(s)| refined by bisection on the stationarity
// condition, written independently of the library's Newton projection.
double brute_force_parameter(const Domain& dom, const Point& z) {
  constexpr int N = 200000;
  int best = 0;
  double best_d = 1e300;
  for (int i = 0; i < N; ++i) {
    const Point g = dom.gamma(2.0 * kPi * i / N);
    const double d = std::hypot(g[0] - z[0], g[1] - z[1]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  auto f = [&](double s) {
    const Point g = dom.gamma(s), d1 = dom.dgamma(s);
    return (g[0] - z[0]) * d1[0] + (g[1] - z[1]) * d1[1];
  };
  double a = 2.0 * kPi * (best - 1) / N, b = 2.0 * kPi * (best + 1) / N;
  for (int it = 0; it < 100; ++it) {
    const double m = 0.5 * (a + b);
    if ((f(m) > 0.0) == (f(a) > 0.0)) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

double dist(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

}  // namespace

TEST(SignedDistance, UnitDiscClosedForm) {
  const auto disc = make_disc(1.0);
  EXPECT_NEAR(signed_distance(*disc, {0.0, 0.0}), 1.0, 1e-14);
  EXPECT_NEAR(signed_distance(*disc, {2.0, 0.0}), -1.0, 1e-14);
  EXPECT_NEAR(signed_distance(*disc, {0.3, -0.4}), 0.5, 1e-14);
}

TEST(SignedDistance, EllipseMatchesDenseGrid) {
  const auto ell = make_ellipse(1.3, 0.8);
  const Point z{1.0, 0.5};
  const double s = brute_force_parameter(*ell, z);
  const double expected = dist(ell->gamma(s), z);  // (1.0, 0.5) lies just inside
  EXPECT_NEAR(signed_distance(*ell, z), expected, 1e-12);
}

TEST(NearestBoundaryPoint, DiscExamples) {
  const auto disc = make_disc(1.0);
  auto p = nearest_boundary_point(*disc, {0.5, 0.0});
  EXPECT_NEAR(p.u[0], 1.0, 1e-13);
  EXPECT_NEAR(p.u[1], 0.0, 1e-13);
  EXPECT_NEAR(p.lambda, 0.5, 1e-13);
  p = nearest_boundary_point(*disc, {0.0, -1.25});
  EXPECT_NEAR(p.u[0], 0.0, 1e-13);
  EXPECT_NEAR(p.u[1], -1.0, 1e-13);
  EXPECT_NEAR(p.lambda, -0.25, 1e-13);
  EXPECT_THROW(nearest_boundary_point(*disc, {0.0, 0.0}), Error);
}

TEST(NearestBoundaryPoint, EllipseAgreesWithGridArgmin) {
  const auto ell = make_ellipse(1.3, 0.8);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> us(0.0, 2.0 * kPi), ul(-0.2, 0.2);
  for (int k = 0; k < 10; ++k) {
    const double s0 = us(rng);
    const Point n = ell->normal(s0);
    const Point g = ell->gamma(s0);
    const double lam = ul(rng);
    const Point z{g[0] + lam * n[0], g[1] + lam * n[1]};
    const auto p = nearest_boundary_point(*ell, z);
    const Point ref = ell->gamma(brute_force_parameter(*ell, z));
    EXPECT_LT(dist(p.u, ref), 1e-10);
    EXPECT_NEAR(p.lambda, lam, 1e-10);
    EXPECT_NEAR(z[0], p.u[0] + p.lambda * ell->normal(p.s)[0], 1e-12);
  }
}

TEST(Curvature, DiscAndEllipse) {
  const auto disc2 = make_disc(2.0);
  for (double s : {0.0, 1.0, 4.0}) EXPECT_NEAR(curvature_at(*disc2, s), 0.5, 1e-14);

  const double a = 1.3, b = 0.8;
  const auto ell = make_ellipse(a, b);
  for (double s : {0.0, 0.4, 1.2, 2.9, 5.5}) {
    const double closed = a * b / std::pow(a * a * std::sin(s) * std::sin(s) + b * b * std::cos(s) * std::cos(s), 1.5);
    // second-order central differences of gamma as the oracle
    const double h = 1e-4;
    const Point gp = ell->gamma(s + h), g0 = ell->gamma(s), gm = ell->gamma(s - h);
    const double x1 = (gp[0] - gm[0]) / (2 * h), y1 = (gp[1] - gm[1]) / (2 * h);
    const double x2 = (gp[0] - 2 * g0[0] + gm[0]) / (h * h), y2 = (gp[1] - 2 * g0[1] + gm[1]) / (h * h);
    const double fd = (x1 * y2 - y1 * x2) / std::pow(x1 * x1 + y1 * y1, 1.5);
    EXPECT_NEAR(curvature_at(*ell, s), fd, 1e-6);
    EXPECT_NEAR(curvature_at(*ell, s), closed, 1e-13);
  }
}

TEST(Curvature, UnitCircleTubeJacobianIsArcLengthRatio) {
  // the circle at distance lambda inward has radius 1 - lambda
  const auto disc = make_disc(1.0);
  for (double lam : {-0.6, -0.1, 0.3, 0.9}) EXPECT_NEAR(1.0 - lam * curvature_at(*disc, 0.7), 1.0 - lam, 1e-14);
}

TEST(TubularRadius, KnownShapes) {
  EXPECT_NEAR(tubular_radius(*make_disc(1.0)), 1.0, 1e-6);
  EXPECT_NEAR(tubular_radius(*make_disc(3.0, {0.5, -1.0})), 3.0, 1e-6);
  EXPECT_NEAR(tubular_radius(*make_ellipse(1.3, 0.8)), 0.8 * 0.8 / 1.3, 1e-6);
  const auto star = make_star(0.1, 5);
  double kmax = 0.0;
  for (int i = 0; i < 20000; ++i) kmax = std::max(kmax, std::abs(star->curvature(2 * kPi * i / 20000)));
  EXPECT_LE(tubular_radius(*star), 1.0 / kmax + 1e-9);
  EXPECT_GT(tubular_radius(*star), 0.0);
}

TEST(BoundaryIntegral, LengthsAndDivergence) {
  const auto disc = make_disc(1.0);
  EXPECT_NEAR(boundary_integral(*disc, [](const Point&) { return 1.0; }), 2.0 * kPi, 1e-13);

  const auto ell = make_ellipse(1.3, 0.8);
  constexpr int N = 2000000;
  double poly = 0.0;
  for (int i = 0; i < N; ++i) poly += dist(ell->gamma(2 * kPi * i / N), ell->gamma(2 * kPi * (i + 1) / N));
  EXPECT_NEAR(boundary_integral(*ell, [](const Point&) { return 1.0; }), poly, 1e-9);

  for (const auto& dom : {disc, ell, make_star(0.15, 3)}) {
    // n_1 as a function on the boundary, through the nearest-point map
    const double v = boundary_integral(*dom, [&](const Point& u) {
      return dom->normal(project_to_boundary(*dom, u).s)[0];
    });
    EXPECT_NEAR(v, 0.0, 1e-12) << dom->describe();
  }
}

TEST(TubeIntegral, DiscExamples) {
  const auto disc = make_disc(1.0);
  EXPECT_NEAR(tube_integral(*disc, 0.5, [](const Point&) { return 1.0; }), 2.0 * kPi, 1e-12);
  const double v = tube_integral(*disc, 0.5, [&](const Point& z) { return signed_distance(*disc, z); });
  EXPECT_NEAR(v, -(2.0 / 3.0) * 0.125 * 2.0 * kPi, 1e-10);
  EXPECT_THROW(tube_integral(*disc, 1.2, [](const Point&) { return 1.0; }), Error);
}

TEST(TubeIntegral, EllipseMatchesQuadtreeOracle) {
  const auto ell = make_ellipse(1.3, 0.8);
  const double t = 0.3;
  auto F = [](const Point& z) { return std::exp(-0.5 * (z[0] * z[0] + 2.0 * z[1] * z[1])) * std::cos(z[0] * z[1]); };
  const double ref = oracle::TubeQuadtree(*ell, t, F).integrate();
  EXPECT_NEAR(tube_integral(*ell, t, F) / ref, 1.0, 1e-4);
}

TEST(GeometryInvariants, DistanceGradientHasUnitNorm) {
  const auto ell = make_ellipse(1.3, 0.8);
  const double tau = tubular_radius(*ell);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> us(0.0, 2 * kPi), ul(-0.49 * tau, 0.49 * tau);
  const double h = 1e-5;
  for (int k = 0; k < 50; ++k) {
    const double s = us(rng), lam = ul(rng);
    const Point g = ell->gamma(s), n = ell->normal(s);
    const Point z{g[0] + lam * n[0], g[1] + lam * n[1]};
    const double dx = (signed_distance(*ell, {z[0] + h, z[1]}) - signed_distance(*ell, {z[0] - h, z[1]})) / (2 * h);
    const double dy = (signed_distance(*ell, {z[0], z[1] + h}) - signed_distance(*ell, {z[0], z[1] - h})) / (2 * h);
    EXPECT_NEAR(std::hypot(dx, dy), 1.0, 1e-6);
  }
}

TEST(GeometryInvariants, NormalFieldGradientBound) {
  const auto ell = make_ellipse(1.3, 0.8);
  const double tau = tubular_radius(*ell);
  auto nfield = [&](const Point& z) { return ell->normal(project_to_boundary(*ell, z).s); };
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> us(0.0, 2 * kPi), ul(-0.5 * tau, 0.5 * tau);
  const double h = 1e-5;
  for (int k = 0; k < 40; ++k) {
    const double s = us(rng), lam = ul(rng);
    const Point g = ell->gamma(s), n = ell->normal(s);
    const Point z{g[0] + lam * n[0], g[1] + lam * n[1]};
    const Point px = nfield({z[0] + h, z[1]}), mx = nfield({z[0] - h, z[1]});
    const Point py = nfield({z[0], z[1] + h}), my = nfield({z[0], z[1] - h});
    const double a = (px[0] - mx[0]) / (2 * h), b = (py[0] - my[0]) / (2 * h);
    const double c = (px[1] - mx[1]) / (2 * h), d = (py[1] - my[1]) / (2 * h);
    // spectral norm of [[a, b], [c, d]]
    const double fro2 = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double op = std::sqrt(0.5 * (fro2 + std::sqrt(std::max(0.0, fro2 * fro2 - 4 * det * det))));
    EXPECT_LE(op, 2.0 / tau + 1e-3);
  }
}

TEST(GeometryInvariants, JacobianBoundsInHalfTube) {
  for (const auto& dom : {make_ellipse(1.3, 0.8), make_star(0.12, 4)}) {
    const double tau = tubular_radius(*dom);
    for (int i = 0; i < 512; ++i) {
      const double kappa = dom->curvature(2 * kPi * i / 512);
      for (double frac : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
        const double lam = frac * tau;
        const double det = 1.0 - lam * kappa;
        EXPECT_GE(det, 0.5 - 1e-12);
        EXPECT_LE(det, 1.5 + 1e-12);
        EXPECT_LE(std::abs(det - 1.0), std::abs(lam) / tau + 1e-12);
      }
    }
  }
}

TEST(GeometryInvariants, LocalFlatness) {
  const auto ell = make_ellipse(1.3, 0.8);
  const double tau = tubular_radius(*ell);
  for (int i = 0; i < 256; ++i) {
    const double s = 2 * kPi * i / 256;
    const Point u = ell->gamma(s), n = ell->normal(s);
    for (int j = 0; j < 256; ++j) {
      const Point z = ell->gamma(2 * kPi * j / 256);
      const Point d{z[0] - u[0], z[1] - u[1]};
      if (std::hypot(d[0], d[1]) > tau) continue;
      const double vperp = d[0] * n[0] + d[1] * n[1];
      const double vt2 = d[0] * d[0] + d[1] * d[1] - vperp * vperp;
      EXPECT_LE(std::abs(vperp), vt2 / tau + 1e-12);
    }
  }
}

TEST(RadialFunction, MatchesStarClosedForm) {
  const auto star = make_star(0.2, 3, 1.5);
  const RadialFunction rho(*star);
  for (double th : {0.0, 0.3, 1.7, 3.1, 6.0}) {
    // gamma(s) = rho(s)(cos s, sin s) so the polar angle equals s
    EXPECT_NEAR(rho(th), 1.5 * (1.0 + 0.2 * std::cos(3 * th)), 1e-12);
  }
  const RadialFunction er(*make_ellipse(1.3, 0.8));
  for (double th : {0.0, 0.5, 2.0}) {
    const double c = std::cos(th) / 1.3, s = std::sin(th) / 0.8;
    EXPECT_NEAR(er(th), 1.0 / std::sqrt(c * c + s * s), 1e-12);
  }
}
