#include "szegolab/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "szegolab/error.hpp"
#include "szegolab/special.hpp"

namespace szl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadialTolerance = 1e-9;

cplx apply_f(const SpectralFunction& f, cplx t) {
  if (f.kind() == SpectralFunction::Kind::kPolynomial) {
    cplx v = 0.0;
    const auto& c = f.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  }
  if (std::abs(t.imag()) > 1e-12) {
    throw Error(ErrorKind::kComplexProfile, "a non-polynomial spectral function needs a real edge profile");
  }
  return f(t.real());
}

cplx simpson(const std::vector<cplx>& v, double step) {
  const std::size_t n = v.size() - 1;  // even number of intervals
  cplx acc = v.front() + v.back();
  for (std::size_t i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
  return acc * step / 3.0;
}

double real_or_throw(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
    std::ostringstream msg;
    msg << what << " has imaginary part " << v.imag();
    throw Error(ErrorKind::kComplexProfile, msg.str());
  }
  return v.real();
}

}  // namespace

EdgeProfiles::EdgeProfiles(Builder build, int table_size) {
  if (table_size < 8) throw Error(ErrorKind::kInvalidArgument, "profile table needs at least 8 directions");
  static constexpr std::array<double, 4> kProbe{0.0, 0.7, 1.9, 4.1};
  std::vector<ProfileQ> probes;
  for (double th : kProbe) probes.push_back(build({std::cos(th), std::sin(th)}));
  grid_ = probes.front().grid;
  double diff = 0.0;
  for (std::size_t p = 1; p < probes.size(); ++p) {
    for (std::size_t i = 0; i < probes[p].values.size(); ++i) {
      diff = std::max(diff, std::abs(probes[p].values[i] - probes[0].values[i]));
    }
  }
  radial_ = diff < kRadialTolerance;
  if (radial_) {
    table_.push_back(std::move(probes.front()));
    return;
  }
  table_.reserve(table_size);
  for (int j = 0; j < table_size; ++j) {
    const double th = 2.0 * kPi * j / table_size;
    table_.push_back(build({std::cos(th), std::sin(th)}));
  }
}

EdgeProfiles EdgeProfiles::from_weight(const PhaseWeight& W, const LambdaGrid& grid) {
  auto shared = std::make_shared<const PhaseWeight>(W);
  return EdgeProfiles([shared, grid](Point w) { return profile_q_halfplane(*shared, w, grid); });
}

EdgeProfiles EdgeProfiles::from_windows(const Window& phi2, const Window& phi1, const LambdaGrid& grid) {
  return EdgeProfiles([phi2, phi1, grid](Point w) { return profile_q_frft(phi2, phi1, w, grid); });
}

ProfileQ EdgeProfiles::at(Point omega) const {
  const double len = std::hypot(omega[0], omega[1]);
  if (!(len > 0.0)) throw Error(ErrorKind::kInvalidArgument, "direction must be non-zero");
  omega = {omega[0] / len, omega[1] / len};
  if (radial_) {
    ProfileQ Q = table_.front();
    Q.omega = omega;
    return Q;
  }
  // 8-point periodic Lagrange interpolation in the angle
  const int T = static_cast<int>(table_.size());
  double th = std::atan2(omega[1], omega[0]);
  if (th < 0.0) th += 2.0 * kPi;
  const double x = th * T / (2.0 * kPi);
  const int j0 = static_cast<int>(std::floor(x)) - 3;
  std::array<double, 8> w{};
  for (int k = 0; k < 8; ++k) {
    double wk = 1.0;
    for (int m = 0; m < 8; ++m) {
      if (m != k) wk *= (x - (j0 + m)) / static_cast<double>(k - m);
    }
    w[k] = wk;
  }
  ProfileQ Q;
  Q.omega = omega;
  Q.grid = grid_;
  Q.values.assign(grid_.size(), cplx(0.0));
  Q.limit_minus = 0.0;
  Q.limit_plus = 0.0;
  Q.tail_clamp = 0.0;
  for (int k = 0; k < 8; ++k) {
    const ProfileQ& P = table_[((j0 + k) % T + T) % T];
    for (std::size_t i = 0; i < Q.values.size(); ++i) Q.values[i] += w[k] * P.values[i];
    Q.limit_minus += w[k] * P.limit_minus;
    Q.limit_plus += w[k] * P.limit_plus;
    Q.tail_clamp = std::max(Q.tail_clamp, P.tail_clamp);
  }
  return Q;
}

double coeff_A0(const RealFn& a, const Domain& dom, const SpectralFunction& f, int boundary_nodes) {
  const Point c = dom.star_center();
  const double ds = 2.0 * kPi / boundary_nodes;
  const auto ray = gauss_legendre_panels(0.0, 1.0, 8, 16);
  double acc = 0.0;
  for (int k = 0; k < boundary_nodes; ++k) {
    const double s = k * ds;
    const Point g = dom.gamma(s), dg = dom.dgamma(s);
    const Point v{g[0] - c[0], g[1] - c[1]};
    const double cross = v[0] * dg[1] - v[1] * dg[0];
    double inner = 0.0;
    for (std::size_t m = 0; m < ray.size(); ++m) {
      const double t = ray.nodes[m];
      inner += ray.weights[m] * t * f(a({c[0] + t * v[0], c[1] + t * v[1]}));
    }
    acc += inner * cross;
  }
  return acc * ds / (2.0 * kPi);
}

double coeff_A1(const RealFn& a, const Domain& dom, const SpectralFunction& f, const EdgeProfiles& Q,
                double* tail_bound, int boundary_nodes) {
  const double ds = 2.0 * kPi / boundary_nodes;
  const double step = Q.grid().step();
  const ProfileQ radial = Q.radial() ? Q.at({1.0, 0.0}) : ProfileQ{};
  std::vector<cplx> phi(Q.grid().size());
  cplx acc = 0.0;
  double tail = 0.0, perimeter = 0.0;
  for (int k = 0; k < boundary_nodes; ++k) {
    const double s = k * ds;
    const Point u = dom.gamma(s);
    const ProfileQ local = Q.radial() ? ProfileQ{} : Q.at(dom.normal(s));
    const ProfileQ& P = Q.radial() ? radial : local;
    const double av = a(u);
    const cplx fa = apply_f(f, av);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = apply_f(f, P.values[i] * av) - P.values[i] * fa;
    acc += dom.speed(s) * simpson(phi, step);
    perimeter += dom.speed(s) * ds;
    tail = std::max(tail, std::abs(phi.front()) + std::abs(phi.back()));
  }
  // the integrand decays at least like a Gaussian tail past the grid ends
  if (tail_bound) *tail_bound += tail * perimeter / (2.0 * kPi);
  return real_or_throw(acc * ds / (2.0 * kPi), "A1");
}

double coeff_A1_step(const RealFn& a, const Domain& dom, const SpectralFunction& f, const EdgeProfiles& Q,
                     Point offset, int boundary_nodes) {
  const double ds = 2.0 * kPi / boundary_nodes;
  const LambdaGrid& lg = Q.grid();
  const ProfileQ radial = Q.radial() ? Q.at({1.0, 0.0}) : ProfileQ{};
  std::vector<cplx> phi(lg.size());
  cplx acc = 0.0;
  for (int k = 0; k < boundary_nodes; ++k) {
    const double s = k * ds;
    const Point u = dom.gamma(s), n = dom.normal(s);
    const double shift = offset[0] * n[0] + offset[1] * n[1];
    if (shift <= lg.lo || shift >= lg.hi) throw Error(ErrorKind::kInvalidArgument, "step offset leaves the lambda grid");
    const ProfileQ local = Q.radial() ? ProfileQ{} : Q.at(n);
    const ProfileQ& P = Q.radial() ? radial : local;
    const double av = a(u);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = apply_f(f, P.values[i] * av);
    // int f(Q a) - chi_[shift, hi] f(a)
    acc += dom.speed(s) * (simpson(phi, lg.step()) - apply_f(f, av) * (lg.hi - shift));
  }
  return real_or_throw(acc * ds / (2.0 * kPi), "A1");
}

double coeff_A1_counting(const Domain& dom, const EdgeProfiles& Q, double delta, int boundary_nodes) {
  const double ds = 2.0 * kPi / boundary_nodes;
  double acc = 0.0;
  if (Q.radial()) {
    const double g = counting_profile_g(Q.at({1.0, 0.0}), delta);
    for (int k = 0; k < boundary_nodes; ++k) acc += dom.speed(k * ds);
    return g * acc * ds / (2.0 * kPi);
  }
  for (int k = 0; k < boundary_nodes; ++k) {
    const double s = k * ds;
    acc += dom.speed(s) * counting_profile_g(Q.at(dom.normal(s)), delta);
  }
  return acc * ds / (2.0 * kPi);
}

TwoTerm two_term(const RealFn& a, bool unit_symbol, const Domain& dom, const SpectralFunction& f,
                 const EdgeProfiles& Q) {
  TwoTerm t;
  t.A0 = coeff_A0(a, dom, f);
  if (f.is_threshold() && unit_symbol) {
    t.A1 = coeff_A1_counting(dom, Q, f.threshold_value());
    t.route = "counting";
  } else {
    t.A1 = coeff_A1(a, dom, f, Q, &t.tail_bound);
    t.route = "profile";
  }
  return t;
}

double predict(const TwoTerm& c, double r) { return c(r); }

AsymptoticsReport fit_and_compare(const std::vector<double>& r_values, const std::vector<double>& measured,
                                  double A0, double A1) {
  if (r_values.size() != measured.size()) throw Error(ErrorKind::kInvalidArgument, "r and measured sizes differ");
  const std::set<double> distinct(r_values.begin(), r_values.end());
  if (distinct.size() < 4) throw Error(ErrorKind::kInvalidArgument, "fit needs at least 4 distinct r values");
  const double rmin = *distinct.begin(), rmax = *distinct.rbegin();
  if (!(rmin > 0.0) || rmax / rmin < 2.0) {
    std::ostringstream msg;
    msg << "r values span [" << rmin << ", " << rmax << "]; need a factor of at least 2";
    throw Error(ErrorKind::kIllConditionedFit, msg.str());
  }

  const int n = static_cast<int>(r_values.size());
  // columns scaled to unit size for conditioning
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double r = r_values[i] / rmax;
    X(i, 0) = r * r;
    X(i, 1) = r;
    X(i, 2) = 1.0;
    y(i) = measured[i];
  }
  const Eigen::Vector3d c = X.colPivHouseholderQr().solve(y);

  AsymptoticsReport rep;
  rep.r_values = r_values;
  rep.measured = measured;
  rep.predicted_A0 = A0;
  rep.predicted_A1 = A1;
  rep.fitted_c2 = c(0) / (rmax * rmax);
  rep.fitted_c1 = c(1) / rmax;
  rep.fitted_c0 = c(2);
  for (int i = 0; i < n; ++i) {
    const double r = r_values[i];
    rep.predicted.push_back(A0 * r * r + A1 * r);
    rep.residuals.push_back(measured[i] - rep.predicted.back());
  }
  auto rel = [](double fitted, double predicted) {
    return predicted == 0.0 ? std::abs(fitted) : std::abs(fitted - predicted) / std::abs(predicted);
  };
  rep.rel_err_c2 = rel(rep.fitted_c2, A0);
  rep.rel_err_c1 = rel(rep.fitted_c1, A1);
  return rep;
}

}  // namespace szl
