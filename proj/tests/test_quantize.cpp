#include <gtest/gtest.h>

#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "szegolab/error.hpp"
#include "szegolab/quantize.hpp"
#include "szegolab/special.hpp"

using namespace szl;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec square(double L, int n) {
  GridSpec g;
  g.half_extent = L;
  g.n = n;
  return g;
}

SymbolGrid constant(double c, const GridSpec& g) {
  return sample_symbol([c](const Point&) { return cplx(c); }, g, "constant");
}

const SymbolGrid& smoothed_disc(double r) {
  static std::map<double, SymbolGrid> cache;
  auto it = cache.find(r);
  if (it == cache.end()) {
    const auto disc = make_disc(1.0);
    GridSpec g = default_symbol_grid(*disc, r);
    g.n = 512;
    it = cache.emplace(r, smoothed_symbol(gaussian_phase_weight(), [](const Point&) { return 1.0; }, *disc, r, g)).first;
  }
  return it->second;
}

// Grid quadrature of q against the cross-Wigner table of (h_j, h_k).
cplx wigner_oracle(const SymbolFn& q, int k, int j) {
  const Window hj = hermite_window(j), hk = hermite_window(k);
  const PhaseWeight W = wigner(hj, hk, default_wigner_grid(hj, hk));
  const double h = W.grid.spacing();
  cplx acc = 0.0;
  for (int a = 0; a < W.grid.n; ++a) {
    for (int b = 0; b < W.grid.n; ++b) acc += q({W.grid.x(a), W.grid.xi(b)}) * W.samples[W.grid.index(a, b)];
  }
  return acc * h * h;
}

Eigen::MatrixXcd random_hermitian(int K, unsigned seed) {
  std::srand(seed);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(K, K);
  return 0.5 * (A + A.adjoint());
}

}  // namespace

TEST(OpHermite, ConstantOneGivesIdentity) {
  const OperatorMatrix M = op_hermite(constant(1.0, square(30.0, 512)), 64);
  EXPECT_LT((M.data - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(M.identity_defect, 1e-10);
}

TEST(OpHermite, MatchesWignerQuadrature) {
  const SymbolFn q = [](const Point& z) {
    const double dx = z[0] - 0.7, dy = z[1] + 0.4;
    return cplx(std::exp(-0.5 * (dx * dx + dy * dy)) * (1.0 + z[0] * z[1]), 0.3 * std::exp(-z[0] * z[0] - 0.3 * z[1] * z[1]));
  };
  const SymbolGrid Q = sample_symbol(q, square(16.0, 512));
  const OperatorMatrix M = op_hermite(Q, 6);
  for (auto [k, j] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 0}, std::pair{2, 5}, std::pair{5, 2}, std::pair{3, 3}}) {
    EXPECT_LT(std::abs(M.data(k, j) - wigner_oracle(q, k, j)), 1e-8) << k << "," << j;
  }
}

TEST(OpHermite, RadialSymbolIsDiagonalWithLaguerreDiagonal) {
  const SymbolGrid& q = smoothed_disc(4.0);
  const OperatorMatrix M = op_hermite(q, 60);
  Eigen::MatrixXcd off = M.data;
  off.diagonal().setZero();
  EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-8);
  // W_{h_k, h_k} = (-1)^k exp(-|z|^2) L_k(2|z|^2) / pi integrated on the grid
  const GridSpec& g = q.grid;
  const double h = g.spacing();
  for (int k : {0, 3, 9, 20}) {
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        const double r2 = g.x(i) * g.x(i) + g.xi(j) * g.xi(j);
        acc += q.at(i, j).real() * std::exp(-r2) * boost::math::laguerre(k, 2.0 * r2);
      }
    }
    acc *= (k % 2 == 0 ? 1.0 : -1.0) * h * h / kPi;
    EXPECT_NEAR(M.data(k, k).real(), acc, 1e-8) << k;
  }
}

TEST(OpHermite, RejectsBasisBeyondGrid) {
  EXPECT_THROW(op_hermite(constant(1.0, square(8.0, 128)), 64), Error);
}

TEST(OpHermite, AdjointIdentity) {
  const SymbolFn q = [](const Point& z) {
    return cplx(std::exp(-0.3 * (z[0] * z[0] + z[1] * z[1])), z[0] * std::exp(-0.5 * (z[0] * z[0] + z[1] * z[1])));
  };
  const GridSpec g = square(16.0, 256);
  const SymbolGrid Q = sample_symbol(q, g);
  const SymbolGrid Qc = sample_symbol([&](const Point& z) { return std::conj(q(z)); }, g);
  const OperatorMatrix A = op_hermite(Q, 40), B = op_hermite(Qc, 40);
  EXPECT_LT((A.data.adjoint() - B.data).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_GT(hermitian_defect(A), 1e-3);
}

TEST(QuantizeInvariants, TraceFormulaAndNormBounds) {
  const SymbolGrid bump = sample_symbol(
      [](const Point& z) { return cplx(std::exp(-0.2 * (z[0] - 1) * (z[0] - 1) - 0.1 * z[1] * z[1])); }, square(24.0, 512));
  const OperatorMatrix B = op_hermite(bump, 150);
  const cplx integral = bump.integral() / (2.0 * kPi);
  EXPECT_LT(std::abs(trace(B) - integral) / std::abs(integral), 1e-6);

  for (double r : {3.0, 4.0}) {
    const OperatorMatrix M = op_hermite(smoothed_disc(r), default_basis_size(*make_disc(1.0), r));
    EXPECT_LT(hermitian_defect(M), 1e-10);
    const auto ev = eigenvalues(M);
    EXPECT_GT(ev.back(), -1e-8);
    EXPECT_LT(ev.front(), 1.0 + 1e-8);
    EXPECT_LE(op_norm(M), 1.0 + 1e-8);
    EXPECT_GE(trace_norm(M), std::abs(trace(M)) - 1e-12);
    EXPECT_LT(M.tail_level, 1e-8);
  }
}

TEST(OpKernel, MatchesHermiteSpectrum) {
  const SymbolGrid& q = smoothed_disc(4.0);
  const OperatorMatrix A = op_kernel(q);
  EXPECT_LT(hermitian_defect(A), 1e-10);
  EXPECT_LT(A.identity_defect, 1e-8);
  const auto ek = eigenvalues(A);
  const auto eh = eigenvalues(op_hermite(q, 60));
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(ek[i], eh[i], 1e-6) << i;
}

TEST(GaussianSymbol, BothRoutesMatchOscillatorEigenvalues) {
  // op[exp(-beta |z|^2)] is a function of the harmonic oscillator with
  // eigenvalue (1 - beta)^k / (1 + beta)^(k + 1) on h_k
  const double beta = 0.2;
  auto lambda = [beta](int k) { return std::pow(1.0 - beta, k) / std::pow(1.0 + beta, k + 1); };
  const SymbolGrid q = sample_symbol(
      [beta](const Point& z) { return cplx(std::exp(-beta * (z[0] * z[0] + z[1] * z[1]))); }, square(20.0, 512));

  const OperatorMatrix M = op_hermite(q, 30);
  for (int k = 0; k < 30; ++k) EXPECT_NEAR(M.data(k, k).real(), lambda(k), 1e-10) << k;

  const OperatorMatrix A = op_kernel(q);
  std::vector<double> hk(8);
  Eigen::MatrixXcd V(A.size(), 8);
  for (int i = 0; i < A.size(); ++i) {
    hermite_functions(A.x0 + i * A.spacing, hk);
    for (int k = 0; k < 8; ++k) V(i, k) = hk[k];
  }
  const Eigen::MatrixXcd AV = A.data * V;
  for (int k = 0; k < 8; ++k) EXPECT_LT((AV.col(k) - lambda(k) * V.col(k)).cwiseAbs().maxCoeff(), 1e-8) << k;
  EXPECT_THROW(op_kernel(constant(1.0, square(20.0, 512))), Error);  // unlocalised kernel
}

TEST(Spectral, PolynomialRoutesAndIdentities) {
  OperatorMatrix M;
  M.data = random_hermitian(30, 3) * 0.4;
  const OperatorMatrix id = spectral_apply(M, SpectralFunction::polynomial({0.0, 1.0}));
  EXPECT_LT((id.data - M.data).cwiseAbs().maxCoeff(), 1e-12);

  const auto sq = SpectralFunction::polynomial({0.0, 0.0, 1.0});
  EXPECT_NEAR(trace(spectral_apply(M, sq)).real(), M.data.squaredNorm(), 1e-10);
  EXPECT_NEAR(spectral_trace(M, sq), M.data.squaredNorm(), 1e-10);

  const auto cube = SpectralFunction::polynomial({0.0, 0.5, 0.0, -2.0});
  const auto e = spectral_apply(M, cube, SpectralRoute::kEigen);
  const auto h = spectral_apply(M, cube, SpectralRoute::kHorner);
  EXPECT_LT((e.data - h.data).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Spectral, HermiticityAndConditionChecks) {
  OperatorMatrix M;
  M.data = Eigen::MatrixXcd::Random(8, 8);
  const auto cube = SpectralFunction::polynomial({0.0, 0.0, 0.0, 1.0});
  EXPECT_LT((spectral_apply(M, cube).data - M.data * M.data * M.data).cwiseAbs().maxCoeff(), 1e-12);
  const auto smooth = SpectralFunction::callable([](double t) { return std::sin(t); }, "sin");
  EXPECT_THROW(spectral_apply(M, smooth), Error);
  EXPECT_THROW(eigenvalues(M), Error);
  EXPECT_THROW(SpectralFunction::polynomial({1.0, 1.0}), Error);
  EXPECT_THROW(SpectralFunction::callable([](double t) { return std::cos(t); }, "cos"), Error);
  EXPECT_THROW(SpectralFunction::threshold(0.0), Error);
}

TEST(Counting, TrivialMatricesAndThresholdFlag) {
  OperatorMatrix I;
  I.data = Eigen::MatrixXcd::Identity(12, 12);
  EXPECT_EQ(counting(I, 0.5).count, 12);
  OperatorMatrix Z;
  Z.data = Eigen::MatrixXcd::Zero(12, 12);
  EXPECT_EQ(counting(Z, 0.5).count, 0);
  const CountResult c = counting(std::vector<double>{0.9, 0.5 + 1e-11, 0.1}, 0.5);
  EXPECT_EQ(c.count, 2);
  EXPECT_TRUE(c.near_threshold);
  EXPECT_FALSE(counting(I, 0.5).near_threshold);
}

TEST(Composition, ConstantSymbolCommutes) {
  EXPECT_LT(composition_remainder(constant(0.7, square(30.0, 256)), 0, 64), 1e-8);
}

TEST(BasisSize, Formula) {
  const auto disc = make_disc(1.0);
  EXPECT_EQ(default_basis_size(*disc, 8.0), 118);
  EXPECT_EQ(default_basis_size(*disc, 12.0), 195);
  EXPECT_EQ(default_basis_size(*disc, 16.0), 291);
  EXPECT_EQ(default_basis_size(*disc, 24.0), 540);
}
