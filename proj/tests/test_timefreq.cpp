#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "szegolab/error.hpp"
#include "szegolab/timefreq.hpp"

using namespace szl;

namespace {

constexpr double kPi = std::numbers::pi;

Point direction(int k, int of) {
  const double th = 2.0 * kPi * k / of + 0.1;
  return {std::cos(th), std::sin(th)};
}

// Rotation invariance reduces the Gaussian half-plane integral to
// int_{-inf}^{lambda} exp(-s^2)/sqrt(pi) ds, integrated adaptively here.
double gaussian_q_oracle(double lambda) {
  auto f = [](double s) { return std::exp(-s * s) / std::sqrt(kPi); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -std::numeric_limits<double>::infinity(),
                                                                        lambda, 15, 1e-15);
}

// Unitary Fourier transform with kernel exp(-i x xi) by direct quadrature.
cplx fourier_oracle(const Window& phi, double xi) {
  const double D = phi.decay_hint, dx = 0.005;
  const int n = static_cast<int>(2 * D / dx);
  cplx acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = -D + i * dx;
    acc += phi(x) * std::polar(1.0, -x * xi);
  }
  return acc * dx / std::sqrt(2.0 * kPi);
}

const PhaseWeight& gaussian_wigner() {
  static const PhaseWeight W = [] {
    const Window g = gaussian_window();
    return wigner(g, g, default_wigner_grid(g, g));
  }();
  return W;
}

}  // namespace

TEST(Windows, GaussianNormalisation) {
  const Window g = gaussian_window();
  EXPECT_NEAR(l2_norm(g), 1.0, 1e-12);
  EXPECT_NEAR(g(0.0).real(), std::pow(kPi, -0.25), 1e-15);
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(l2_norm(hermite_window(k)), 1.0, 1e-12) << k;
}

TEST(Wigner, GaussianClosedForm) {
  const PhaseWeight& W = gaussian_wigner();
  double err = 0.0;
  for (int i = 0; i < W.grid.n; i += 3) {
    for (int j = 0; j < W.grid.n; j += 3) {
      const double x = W.grid.x(i), xi = W.grid.xi(j);
      err = std::max(err, std::abs(W.samples[W.grid.index(i, j)] - std::exp(-x * x - xi * xi) / kPi));
    }
  }
  EXPECT_LT(err, 1e-8);
  EXPECT_NEAR(std::abs(W.integral - 1.0), 0.0, 1e-10);
  // interpolation off the grid
  EXPECT_NEAR(W(0.123, -0.77).real(), std::exp(-0.123 * 0.123 - 0.77 * 0.77) / kPi, 1e-9);
}

TEST(Wigner, MarginalAndRealness) {
  const Window h0 = hermite_window(0), h1 = hermite_window(1), h3 = hermite_window(3);
  for (const auto& pair : {std::pair{h0, h0}, std::pair{h3, h3}, std::pair{h0, h1}, std::pair{h3, h1}}) {
    const Window& p2 = pair.first;
    const Window& p1 = pair.second;
    const PhaseWeight W = wigner(p2, p1, default_wigner_grid(p2, p1));
    const double h = W.grid.spacing();
    double err = 0.0;
    for (int i = 0; i < W.grid.n; i += 7) {
      cplx marginal = 0.0;
      for (int j = 0; j < W.grid.n; ++j) marginal += W.samples[W.grid.index(i, j)] * h;
      const double x = W.grid.x(i);
      err = std::max(err, std::abs(marginal - p2(x) * std::conj(p1(x))));
    }
    EXPECT_LT(err, 1e-8) << W.provenance;
    if (p2.name == p1.name) {
      double im = 0.0;
      for (const auto& v : W.samples) im = std::max(im, std::abs(v.imag()));
      EXPECT_LT(im, 1e-12);
      EXPECT_TRUE(W.real_valued);
    }
  }
}

TEST(Wigner, CoarseGridIsRejected) {
  const Window g = gaussian_window();
  GridSpec tiny;
  tiny.half_extent = 3.0;
  tiny.n = 64;
  EXPECT_THROW(wigner(g, g, tiny), Error);
}

TEST(ProfileHalfplane, GaussianMatchesRotationReducedOracle) {
  const PhaseWeight& W = gaussian_wigner();
  for (int d = 0; d < 3; ++d) {
    const ProfileQ Q = profile_q_halfplane(W, direction(d, 3));
    double err = 0.0;
    for (int i = 0; i < Q.grid.size(); i += 16) err = std::max(err, std::abs(Q.values[i] - gaussian_q_oracle(Q.grid.at(i))));
    EXPECT_LT(err, 1e-8);
    EXPECT_NEAR(Q(0.0).real(), 0.5, 1e-10);
    EXPECT_NEAR(Q(50.0).real(), 1.0, 1e-10);
    EXPECT_NEAR(Q(-50.0).real(), 0.0, 1e-10);
  }
}

TEST(Frft, IdentityAndFourierEnds) {
  const Window h2 = hermite_window(2);
  const Window same = frft(h2, {1.0, 0.0});
  for (double x : {-3.0, -0.4, 0.0, 1.5}) EXPECT_LT(std::abs(same(x) - h2(x)), 1e-10);

  const Window g = gaussian_window();
  const Window gf = frft(g, {0.0, 1.0});
  for (double x : {-2.0, 0.0, 0.7}) EXPECT_LT(std::abs(gf(x) - g(x)), 1e-10);

  for (int k = 0; k <= 4; ++k) {
    const Window hk = hermite_window(k);
    const Window f = frft(hk, {0.0, 1.0});
    for (double xi : {-1.7, -0.2, 0.9, 2.4}) EXPECT_LT(std::abs(f(xi) - fourier_oracle(hk, xi)), 1e-10) << k;
  }
  const Window h1 = hermite_window(1);
  EXPECT_LT(std::abs(frft(h1, {0.0, 1.0})(0.8) - cplx(0.0, -1.0) * h1(0.8)), 1e-12);
}

TEST(Frft, RejectsSmallBasis) {
  EXPECT_THROW(frft(hermite_window(40), {0.0, 1.0}, 30), Error);
}

TEST(Frft, Unitary) {
  const Window phi = sampled_window(-9.0, 0.01, [] {
    std::vector<cplx> v(1801);
    for (int i = 0; i < 1801; ++i) {
      const double x = -9.0 + 0.01 * i;
      v[i] = cplx(std::exp(-0.5 * (x - 0.7) * (x - 0.7)), 0.3 * x * std::exp(-x * x));
    }
    return v;
  }());
  for (int d = 0; d < 4; ++d) {
    const Window f = frft(phi, direction(d, 4));
    EXPECT_NEAR(l2_norm(f), l2_norm(phi), 1e-10);
  }
}

TEST(ProfileFrft, RouteEquivalenceAtEightAngles) {
  const Window h0 = hermite_window(0), h1 = hermite_window(1);
  const PhaseWeight Wg = gaussian_wigner();
  const PhaseWeight W01 = wigner(h0, h1, default_wigner_grid(h0, h1));
  for (int d = 0; d < 8; ++d) {
    const Point w = direction(d, 8);
    const ProfileQ a = profile_q_halfplane(Wg, w), b = profile_q_frft(h0, h0, w);
    const ProfileQ c = profile_q_halfplane(W01, w), e = profile_q_frft(h0, h1, w);
    double err_g = 0.0, err_01 = 0.0;
    for (int i = 0; i < a.grid.size(); ++i) {
      if (std::abs(a.grid.at(i)) > 6.0) continue;
      err_g = std::max(err_g, std::abs(a.values[i] - b.values[i]));
      err_01 = std::max(err_01, std::abs(c.values[i] - e.values[i]));
    }
    EXPECT_LT(err_g, 1e-6) << d;
    EXPECT_LT(err_01, 1e-6) << d;
    EXPECT_LT(std::abs(e.limit_plus), 1e-12);  // <h0, h1> = 0
  }
}

TEST(CountingProfile, GaussianValues) {
  const ProfileQ Q = profile_q_frft(gaussian_window(), gaussian_window(), {1.0, 0.0});
  EXPECT_NEAR(counting_profile_g(Q, 0.5), 0.0, 1e-12);
  // bisection on (1 + erf(lambda))/2 = 0.25
  double a = -5.0, b = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (0.5 * (1.0 + std::erf(m)) < 0.25) a = m; else b = m;
  }
  const double oracle = -0.5 * (a + b);
  EXPECT_NEAR(oracle, 0.476936, 1e-6);
  EXPECT_NEAR(counting_profile_g(Q, 0.25), oracle, 1e-9);
  for (double delta : {0.1, 0.25, 0.6, 0.9}) {
    EXPECT_NEAR(counting_profile_g(Q, delta), counting_profile_g_monotone(Q, delta), 1e-8);
  }
}

TEST(CountingProfile, RejectsFlatAndComplexProfiles) {
  ProfileQ flat;
  flat.values.assign(flat.grid.size(), cplx(0.0));
  for (int i = 0; i < flat.grid.size(); ++i) {
    const double l = flat.grid.at(i);
    flat.values[i] = l < -1.0 ? 0.5 * (1.0 + std::erf(l + 1.0)) : (l > 1.0 ? 0.5 * (1.0 + std::erf(l - 1.0)) : 0.5);
  }
  EXPECT_THROW(counting_profile_g(flat, 0.5), Error);
  ProfileQ cq = flat;
  cq.values[100] += cplx(0.0, 1e-6);
  EXPECT_THROW(counting_profile_g(cq, 0.3), Error);
}

TEST(ProfileInvariants, NormalisationMonotonicityAndMomentBound) {
  const PhaseWeight& W = gaussian_wigner();
  for (int d = 0; d < 8; ++d) {
    const Point w = direction(d, 8);
    const ProfileQ Q = profile_q_halfplane(W, w);
    EXPECT_NEAR(std::abs(Q.limit_minus), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(Q.limit_plus - 1.0), 0.0, 1e-10);
    for (int i = 1; i < Q.grid.size(); ++i) EXPECT_GE(Q.values[i].real() - Q.values[i - 1].real(), -1e-12);

    // |Q - chi_[0,inf)| jumps at 0: Simpson on each half separately
    double l1 = 0.0;
    const int zero = static_cast<int>(std::lround(-Q.grid.lo / Q.grid.step()));
    auto simpson = [&](int from, int to, double target) {
      double acc = 0.0;
      for (int i = from; i + 2 <= to; i += 2) {
        acc += std::abs(Q.values[i] - target) + 4.0 * std::abs(Q.values[i + 1] - target) +
               std::abs(Q.values[i + 2] - target);
      }
      return acc * Q.grid.step() / 3.0;
    };
    l1 = simpson(0, zero, 0.0) + simpson(zero, Q.grid.size() - 1, 1.0);
    // int |z . omega| |W| for the Gaussian is 1/sqrt(pi)
    const double directional = 1.0 / std::sqrt(kPi);
    EXPECT_LE(l1, directional + 1e-9);  // equality for monotone Q
    EXPECT_LE(directional, W.moments[1] + 1e-9);
  }
}
