#include "szegolab/verify.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "szegolab/asymptotics.hpp"
#include "szegolab/error.hpp"
#include "szegolab/geometry.hpp"
#include "szegolab/quantize.hpp"
#include "szegolab/symbolics.hpp"
#include "szegolab/timefreq.hpp"

namespace szl {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  double measured;
  std::string detail;
};

class Battery {
 public:
  Battery(std::string suite, std::vector<Check>& out) : suite_(std::move(suite)), out_(out) {}

  /// measured is an error size; the check passes when it is below tolerance.
  void run(const std::string& name, double tolerance, const std::function<Outcome()>& body) {
    Check c{suite_, name, false, 0.0, tolerance, ""};
    try {
      const Outcome o = body();
      c.measured = o.measured;
      c.detail = o.detail;
      c.pass = std::isfinite(o.measured) && o.measured < tolerance;
    } catch (const std::exception& e) {
      c.measured = std::numeric_limits<double>::quiet_NaN();
      c.detail = e.what();
    }
    out_.push_back(std::move(c));
  }

 private:
  std::string suite_;
  std::vector<Check>& out_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Point direction(int k, int of) { return {std::cos(2.0 * kPi * k / of), std::sin(2.0 * kPi * k / of)}; }

double erf_bisection(double delta) {
  double a = -6.0, b = 6.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (0.5 * (1.0 + std::erf(m)) < delta) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

const RealFn kOne = [](const Point&) { return 1.0; };

void geometry_suite(std::vector<Check>& out, unsigned seed) {
  Battery b("geometry", out);
  const auto ell = make_ellipse(1.3, 0.8);
  const auto star = make_star(0.15, 3);
  const double area = kPi * 1.3 * 0.8;
  const double perimeter = 4.0 * 1.3 * boost::math::ellint_2(std::sqrt(1.0 - 0.64 / 1.69));

  b.run("ellipse perimeter vs complete elliptic integral", 1e-10, [&] {
    const double L = boundary_integral(*ell, [](const Point&) { return 1.0; });
    return Outcome{std::abs(L - perimeter), "L=" + fmt(L)};
  });
  b.run("boundary integral of z . n (inward) equals minus twice the area", 1e-10, [&] {
    const double v = boundary_integral(*ell, [&](const Point& u) {
      const Point n = ell->normal(project_to_boundary(*ell, u).s);
      return u[0] * n[0] + u[1] * n[1];
    });
    return Outcome{std::abs(v + 2.0 * area), "integral=" + fmt(v)};
  });
  b.run("star total curvature is 2 pi", 1e-9, [&] {
    const double v = boundary_integral(*star, [&](const Point& u) {
      return curvature_at(*star, project_to_boundary(*star, u).s);
    });
    return Outcome{std::abs(v - 2.0 * kPi), "integral=" + fmt(v)};
  });
  b.run("Steiner tube area 2 t L for the ellipse, t = 0.3", 1e-10, [&] {
    const double v = tube_integral(*ell, 0.3, [](const Point&) { return 1.0; });
    return Outcome{std::abs(v - 0.6 * perimeter) / (0.6 * perimeter), "area=" + fmt(v)};
  });
  b.run("ellipse tubular radius b^2 / a", 1e-6, [&] {
    const double tau = tubular_radius(*ell);
    return Outcome{std::abs(tau - 0.64 / 1.3), "tau=" + fmt(tau)};
  });
  b.run("normal coordinates round trip on random tube points", 1e-9, [&] {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> s_dist(0.0, 2.0 * kPi), l_dist(-0.8, 0.8);
    double err = 0.0;
    for (const DomainPtr& dom : {ell, star}) {
      const double tau = tubular_radius(*dom);
      for (int k = 0; k < 64; ++k) {
        const double s = s_dist(rng), lam = l_dist(rng) * tau;
        const Point u = dom->gamma(s), n = dom->normal(s);
        const Projection p = nearest_boundary_point(*dom, {u[0] + lam * n[0], u[1] + lam * n[1]});
        err = std::max(err, std::abs(p.lambda - lam));
        err = std::max(err, std::hypot(p.u[0] - u[0], p.u[1] - u[1]));
      }
    }
    return Outcome{err, "seed=" + std::to_string(seed)};
  });
}

void timefreq_suite(std::vector<Check>& out) {
  Battery b("timefreq", out);
  const PhaseWeight Wg = gaussian_phase_weight();
  const Window h0 = hermite_window(0), h1 = hermite_window(1), h2 = hermite_window(2);

  b.run("Gaussian half-plane profile equals (1 + erf)/2", 1e-8, [&] {
    double err = 0.0;
    for (int d = 0; d < 3; ++d) {
      const ProfileQ Q = profile_q_halfplane(Wg, direction(d, 3));
      for (int i = 0; i < Q.grid.size(); ++i) {
        err = std::max(err, std::abs(Q.values[i] - 0.5 * (1.0 + std::erf(Q.grid.at(i)))));
      }
    }
    return Outcome{err, "3 directions"};
  });
  auto route_gap = [&](const PhaseWeight& W, const Window& p2, const Window& p1) {
    double err = 0.0;
    for (int d = 0; d < 8; ++d) {
      const ProfileQ a = profile_q_halfplane(W, direction(d, 8)), c = profile_q_frft(p2, p1, direction(d, 8));
      for (int i = 0; i < a.grid.size(); ++i) {
        if (std::abs(a.grid.at(i)) <= 6.0) err = std::max(err, std::abs(a.values[i] - c.values[i]));
      }
    }
    return err;
  };
  b.run("route equivalence, Gaussian window", 1e-6, [&] { return Outcome{route_gap(Wg, h0, h0), "8 directions"}; });
  b.run("route equivalence, (h0, h1) window pair", 1e-6, [&] {
    return Outcome{route_gap(wigner(h0, h1, default_wigner_grid(h0, h1)), h0, h1), "8 directions"};
  });
  b.run("Wigner x-marginal of h2 is h2^2", 1e-8, [&] {
    const PhaseWeight W = wigner(h2, h2, default_wigner_grid(h2, h2));
    const double h = W.grid.spacing();
    double err = 0.0;
    for (int i = 0; i < W.grid.n; i += 3) {
      cplx m = 0.0;
      for (int j = 0; j < W.grid.n; ++j) m += W.samples[W.grid.index(i, j)] * h;
      const double x = W.grid.x(i);
      err = std::max(err, std::abs(m - std::norm(h2(x))));
    }
    return Outcome{err, ""};
  });
  b.run("counting density g(0.25) vs erf bisection", 1e-9, [&] {
    const double g = counting_profile_g(profile_q_halfplane(Wg, {1.0, 0.0}), 0.25);
    return Outcome{std::abs(g + erf_bisection(0.25)), "g=" + fmt(g)};
  });
  b.run("fractional Fourier transform preserves the L2 norm", 1e-10, [&] {
    std::vector<cplx> v(1801);
    for (int i = 0; i < 1801; ++i) {
      const double x = -9.0 + 0.01 * i;
      v[i] = cplx(std::exp(-0.5 * (x - 0.7) * (x - 0.7)), 0.3 * x * std::exp(-x * x));
    }
    const Window phi = sampled_window(-9.0, 0.01, v);
    double err = 0.0;
    for (int d = 0; d < 4; ++d) err = std::max(err, std::abs(l2_norm(frft(phi, direction(d, 4))) - l2_norm(phi)));
    return Outcome{err, ""};
  });
}

void symbolics_suite(std::vector<Check>& out) {
  Battery b("symbolics", out);
  const PhaseWeight W = gaussian_phase_weight();
  const auto disc = make_disc(1.0);

  b.run("smoothed disc vs non-central chi-squared, r = 3", 1e-9, [&] {
    const double r = 3.0;
    GridSpec g = default_symbol_grid(*disc, r);
    g.n = 512;
    const SymbolGrid q = smoothed_symbol(W, kOne, *disc, r, g);
    double err = 0.0;
    for (int i = 0; i < g.n; i += 5) {
      for (int j = 0; j < g.n; j += 7) {
        const double rho = std::hypot(g.x(i), g.xi(j));
        const double ref = rho == 0.0 ? 1.0 - std::exp(-r * r)
                                       : boost::math::cdf(boost::math::non_central_chi_squared(2.0, 2.0 * rho * rho), 2.0 * r * r);
        err = std::max(err, std::abs(q.at(i, j) - ref));
      }
    }
    return Outcome{err, q.meta};
  });
  const auto ell = make_ellipse(1.3, 0.8);
  GridSpec ge = default_symbol_grid(*ell, 4.0);
  ge.n = 512;
  b.run("mass conservation on the dilated ellipse, r = 4", 1e-10, [&] {
    const SymbolGrid q = smoothed_symbol(W, kOne, *ell, 4.0, ge);
    const double ref = 16.0 * kPi * 1.3 * 0.8;
    return Outcome{std::abs(q.integral().real() - ref) / ref, ""};
  });
  b.run("cutoff symbol stays in [0, 1] and real", 1e-12, [&] {
    const SymbolGrid q = smoothed_symbol(W, kOne, *ell, 4.0, ge);
    double err = q.max_imag();
    for (const cplx& v : q.values) err = std::max({err, -v.real(), v.real() - 1.0});
    return Outcome{err, ""};
  });
  b.run("first Moyal term equals the Poisson bracket", 1e-11, [&] {
    GridSpec g;
    g.half_extent = 10.0;
    g.n = 256;
    auto p = [](const Point& z) { return std::exp(-z[0] * z[0] - 0.5 * z[1] * z[1]); };
    auto q = [](const Point& z) { return std::exp(-0.7 * (z[0] - 1) * (z[0] - 1) - (z[1] + 0.5) * (z[1] + 0.5)); };
    const SymbolGrid P = sample_symbol([&](const Point& z) { return cplx(p(z)); }, g);
    const SymbolGrid Q = sample_symbol([&](const Point& z) { return cplx(q(z)); }, g);
    const SymbolGrid m1 = moyal_term(P, Q, 1);
    double err = 0.0;
    for (int i = 0; i < g.n; i += 3) {
      for (int j = 0; j < g.n; j += 3) {
        const Point z{g.x(i), g.xi(j)};
        const double px = -2.0 * z[0] * p(z), pxi = -z[1] * p(z);
        const double qx = -1.4 * (z[0] - 1) * q(z), qxi = -2.0 * (z[1] + 0.5) * q(z);
        err = std::max(err, std::abs(m1.at(i, j) - cplx(0.0, 0.5) * (px * qxi - pxi * qx)));
      }
    }
    return Outcome{err, ""};
  });
}

void quantize_suite(std::vector<Check>& out) {
  Battery b("quantize", out);
  const auto disc = make_disc(1.0);
  GridSpec g = default_symbol_grid(*disc, 4.0);
  g.n = 512;
  const SymbolGrid q = smoothed_symbol(gaussian_phase_weight(), kOne, *disc, 4.0, g);
  const int K = default_basis_size(*disc, 4.0);

  b.run("q = 1 quantises to the identity, K = 64", 1e-8, [&] {
    GridSpec big;
    big.half_extent = 30.0;
    big.n = 512;
    const OperatorMatrix M = op_hermite(sample_symbol([](const Point&) { return cplx(1.0); }, big), 64);
    return Outcome{(M.data - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff(), ""};
  });
  b.run("trace equals the symbol integral over 2 pi, disc r = 4", 1e-5, [&] {
    const OperatorMatrix M = op_hermite(q, K);
    const double ref = q.integral().real() / (2.0 * kPi);
    return Outcome{std::abs(trace(M) - ref) / ref, "K=" + std::to_string(K)};
  });
  b.run("spectrum confined to [0, 1], disc r = 4", 1e-8, [&] {
    const auto ev = eigenvalues(op_hermite(q, K));
    return Outcome{std::max({0.0, -ev.back(), ev.front() - 1.0}), "max=" + fmt(ev.front()) + " min=" + fmt(ev.back())};
  });
  b.run("Hermite and kernel constructions share the top 20 eigenvalues", 1e-6, [&] {
    const auto ek = eigenvalues(op_kernel(q));
    const auto eh = eigenvalues(op_hermite(q, 60));
    double err = 0.0;
    for (int i = 0; i < 20; ++i) err = std::max(err, std::abs(ek[i] - eh[i]));
    return Outcome{err, ""};
  });
  b.run("Gaussian symbol has the oscillator eigenvalues", 1e-10, [&] {
    const double beta = 0.2;
    GridSpec sq;
    sq.half_extent = 20.0;
    sq.n = 512;
    const OperatorMatrix M = op_hermite(
        sample_symbol([beta](const Point& z) { return cplx(std::exp(-beta * (z[0] * z[0] + z[1] * z[1]))); }, sq), 30);
    double err = 0.0;
    for (int k = 0; k < 30; ++k) {
      err = std::max(err, std::abs(M.data(k, k) - std::pow(1.0 - beta, k) / std::pow(1.0 + beta, k + 1)));
    }
    return Outcome{err, ""};
  });
  b.run("op[conj q] is the adjoint of op[q]", 1e-12, [&] {
    GridSpec sq;
    sq.half_extent = 16.0;
    sq.n = 256;
    auto p = [](const Point& z) { return std::exp(cplx(-0.3 * z[0] * z[0] - 0.2 * z[1] * z[1], 0.4 * z[0] - 0.1 * z[1])); };
    const OperatorMatrix A = op_hermite(sample_symbol(p, sq), 24);
    const OperatorMatrix B = op_hermite(sample_symbol([&](const Point& z) { return std::conj(p(z)); }, sq), 24);
    return Outcome{(A.data.adjoint() - B.data).cwiseAbs().maxCoeff(), ""};
  });
}

void szego_suite(std::vector<Check>& out) {
  Battery b("szego", out);
  const EdgeProfiles Q = EdgeProfiles::from_weight(gaussian_phase_weight());
  const auto disc = make_disc(1.0);
  const auto ell = make_ellipse(1.3, 0.8);
  const auto star = make_star(0.2, 3, 1.0);

  b.run("A0 of the unit-disc counting problem is 1/2", 1e-13, [&] {
    return Outcome{std::abs(coeff_A0(kOne, *disc, SpectralFunction::threshold(0.5)) - 0.5), ""};
  });
  b.run("A1 vanishes for linear f", 1e-12, [&] {
    const RealFn a = [](const Point& z) { return 1.0 + 0.4 * z[0] * z[1]; };
    double err = 0.0;
    for (const DomainPtr& dom : {disc, ell, star}) {
      err = std::max(err, std::abs(coeff_A1(a, *dom, SpectralFunction::polynomial({0.0, 1.7}), Q)));
    }
    return Outcome{err, "disc, ellipse, star"};
  });
  b.run("A1 is independent of the lambda origin", 1e-8, [&] {
    const auto f = SpectralFunction::polynomial({0.0, 0.0, 1.0, 0.5});
    double err = 0.0;
    for (const DomainPtr& dom : {ell, star}) {
      const double base = coeff_A1(kOne, *dom, f, Q);
      for (const Point e : {Point{0.7, -0.3}, Point{-1.5, 2.0}}) {
        err = std::max(err, std::abs(coeff_A1_step(kOne, *dom, f, Q, e) - base));
      }
    }
    return Outcome{err, ""};
  });
  b.run("A0 scales by r^2 under dilation, r = 3", 1e-11, [&] {
    const RealFn a = [](const Point& z) { return std::exp(-0.5 * (z[0] * z[0] + z[1] * z[1])) + 0.2 * z[0]; };
    const RealFn a3 = [&](const Point& z) { return a({z[0] / 3.0, z[1] / 3.0}); };
    const auto f = SpectralFunction::polynomial({0.0, 1.0, 1.0});
    return Outcome{std::abs(coeff_A0(a3, *make_star(0.2, 3, 3.0), f) - 9.0 * coeff_A0(a, *star, f)), ""};
  });
  b.run("counting A1 at delta = 0.25 vs erf bisection", 1e-9, [&] {
    const double v = coeff_A1_counting(*disc, Q, 0.25);
    return Outcome{std::abs(v + erf_bisection(0.25)), "A1=" + fmt(v)};
  });
  b.run("counting A1 at delta = 0.5 vanishes", 1e-12, [&] {
    return Outcome{std::abs(coeff_A1_counting(*disc, Q, 0.5)), ""};
  });
  b.run("A1 for f = t^2 vs one-dimensional quadrature", 1e-9, [&] {
    auto integrand = [](double l) {
      const double q = 0.5 * (1.0 + std::erf(l));
      return q * (1.0 - q);
    };
    const double inf = std::numeric_limits<double>::infinity();
    const double ref = -boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, -inf, inf, 15, 1e-15);
    const double v = coeff_A1(kOne, *disc, SpectralFunction::polynomial({0.0, 0.0, 1.0}), Q);
    return Outcome{std::abs(v - ref), "A1=" + fmt(v)};
  });
  b.run("two-term prediction at r = 10 is 50", 1e-10, [&] {
    const TwoTerm t = two_term(kOne, true, *disc, SpectralFunction::threshold(0.5), Q);
    return Outcome{std::abs(predict(t, 10.0) - 50.0), ""};
  });
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"geometry", "timefreq", "symbolics", "quantize", "szego", "all"};
  return names;
}

std::vector<Check> run_verify(const std::string& suite, unsigned seed) {
  std::vector<Check> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "geometry") { geometry_suite(out, seed); known = true; }
  if (all || suite == "timefreq") { timefreq_suite(out); known = true; }
  if (all || suite == "symbolics") { symbolics_suite(out); known = true; }
  if (all || suite == "quantize") { quantize_suite(out); known = true; }
  if (all || suite == "szego") { szego_suite(out); known = true; }
  if (!known) {
    throw Error(ErrorKind::kInvalidArgument,
                "unknown suite '" + suite + "'; expected geometry, timefreq, symbolics, quantize, szego or all");
  }
  return out;
}

}  // namespace szl
