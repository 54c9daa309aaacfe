#include "szegolab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "szegolab/error.hpp"
#include "szegolab/special.hpp"

namespace szl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
double cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }
Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
double norm(const Point& a) { return std::hypot(a[0], a[1]); }

double wrap_angle(double s) {
  s = std::fmod(s, kTwoPi);
  return s < 0.0 ? s + kTwoPi : s;
}

class Disc final : public Domain {
 public:
  Disc(double radius, Point center) : R_(radius), c_(center) {
    if (!(radius > 0.0)) throw Error(ErrorKind::kInvalidArgument, "disc radius must be positive");
  }
  Point gamma(double s) const override { return {c_[0] + R_ * std::cos(s), c_[1] + R_ * std::sin(s)}; }
  Point dgamma(double s) const override { return {-R_ * std::sin(s), R_ * std::cos(s)}; }
  Point ddgamma(double s) const override { return {-R_ * std::cos(s), -R_ * std::sin(s)}; }
  bool inside(const Point& z) const override { return norm(sub(z, c_)) <= R_; }
  double bounding_radius() const override { return norm(c_) + R_; }
  Point star_center() const override { return c_; }
  std::string describe() const override {
    std::ostringstream os;
    os << "disc(R=" << R_ << ", c=(" << c_[0] << "," << c_[1] << "))";
    return os.str();
  }

 private:
  double R_;
  Point c_;
};

class Ellipse final : public Domain {
 public:
  Ellipse(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ellipse semi-axes must be positive");
  }
  Point gamma(double s) const override { return {a_ * std::cos(s), b_ * std::sin(s)}; }
  Point dgamma(double s) const override { return {-a_ * std::sin(s), b_ * std::cos(s)}; }
  Point ddgamma(double s) const override { return {-a_ * std::cos(s), -b_ * std::sin(s)}; }
  bool inside(const Point& z) const override {
    return (z[0] / a_) * (z[0] / a_) + (z[1] / b_) * (z[1] / b_) <= 1.0;
  }
  double bounding_radius() const override { return std::max(a_, b_); }
  std::string describe() const override {
    std::ostringstream os;
    os << "ellipse(a=" << a_ << ", b=" << b_ << ")";
    return os.str();
  }

 private:
  double a_;
  double b_;
};

class Star final : public Domain {
 public:
  Star(double eps, int k, double radius) : eps_(eps), k_(k), R_(radius) {
    if (!(radius > 0.0) || k < 1 || !(std::abs(eps) < 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "star domain needs radius > 0, k >= 1, |eps| < 1");
    }
  }
  Point gamma(double s) const override {
    const double r = rho(s);
    return {r * std::cos(s), r * std::sin(s)};
  }
  Point dgamma(double s) const override {
    const double r = rho(s), dr = drho(s);
    const double c = std::cos(s), sn = std::sin(s);
    return {dr * c - r * sn, dr * sn + r * c};
  }
  Point ddgamma(double s) const override {
    const double r = rho(s), dr = drho(s), ddr = ddrho(s);
    const double c = std::cos(s), sn = std::sin(s);
    return {ddr * c - 2.0 * dr * sn - r * c, ddr * sn + 2.0 * dr * c - r * sn};
  }
  bool inside(const Point& z) const override { return norm(z) <= rho(std::atan2(z[1], z[0])); }
  double bounding_radius() const override { return R_ * (1.0 + std::abs(eps_)); }
  std::string describe() const override {
    std::ostringstream os;
    os << "star(eps=" << eps_ << ", k=" << k_ << ", R=" << R_ << ")";
    return os.str();
  }

 private:
  double rho(double s) const { return R_ * (1.0 + eps_ * std::cos(k_ * s)); }
  double drho(double s) const { return -R_ * eps_ * k_ * std::sin(k_ * s); }
  double ddrho(double s) const { return -R_ * eps_ * k_ * k_ * std::cos(k_ * s); }

  double eps_;
  int k_;
  double R_;
};

double dist2(const Domain& dom, const Point& z, double s) {
  const Point d = sub(dom.gamma(s), z);
  return dot(d, d);
}

// Minimise |z - gamma(s)|^2 near s0 within +-width: Newton on the stationarity
// condition, golden section if Newton leaves the bracket or stalls.
double refine_projection(const Domain& dom, const Point& z, double s0, double width) {
  double s = s0;
  bool ok = true;
  for (int it = 0; it < 50; ++it) {
    const Point d = sub(dom.gamma(s), z);
    const Point g1 = dom.dgamma(s);
    const Point g2 = dom.ddgamma(s);
    const double f = dot(d, g1);
    const double fp = dot(g1, g1) + dot(d, g2);
    if (!(fp > 0.0)) {
      ok = false;
      break;
    }
    const double step = f / fp;
    s -= step;
    if (std::abs(s - s0) > width) {
      ok = false;
      break;
    }
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(s))) break;
  }
  if (ok) return s;

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = s0 - width, b = s0 + width;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = dist2(dom, z, c), fd = dist2(dom, z, d);
  while (b - a > 1e-14) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = dist2(dom, z, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = dist2(dom, z, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Point Domain::normal(double s) const {
  const Point t = dgamma(s);
  const double len = norm(t);
  return {-t[1] / len, t[0] / len};
}

double Domain::curvature(double s) const {
  const Point d1 = dgamma(s);
  const Point d2 = ddgamma(s);
  const double len = norm(d1);
  return cross(d1, d2) / (len * len * len);
}

double Domain::speed(double s) const { return norm(dgamma(s)); }

DomainPtr make_disc(double radius, Point center) { return std::make_shared<Disc>(radius, center); }
DomainPtr make_ellipse(double a, double b) { return std::make_shared<Ellipse>(a, b); }
DomainPtr make_star(double eps, int k, double radius) { return std::make_shared<Star>(eps, k, radius); }

Projection project_to_boundary(const Domain& dom, const Point& z) {
  constexpr int kCoarse = 512;
  constexpr int kCandidates = 3;
  const double ds = kTwoPi / kCoarse;
  std::array<double, kCoarse> d2{};
  for (int i = 0; i < kCoarse; ++i) d2[i] = dist2(dom, z, i * ds);

  // local minima of the coarse samples, best first
  std::vector<int> minima;
  for (int i = 0; i < kCoarse; ++i) {
    const double prev = d2[(i + kCoarse - 1) % kCoarse];
    const double next = d2[(i + 1) % kCoarse];
    if (d2[i] <= prev && d2[i] <= next) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return d2[a] < d2[b]; });
  if (minima.size() > kCandidates) minima.resize(kCandidates);

  double best_s = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i : minima) {
    const double s = refine_projection(dom, z, i * ds, 1.5 * ds);
    const double v = dist2(dom, z, s);
    if (v < best_d2) {
      best_d2 = v;
      best_s = s;
    }
  }
  Projection p;
  p.s = wrap_angle(best_s);
  p.u = dom.gamma(p.s);
  const double dist = std::sqrt(best_d2);
  p.lambda = dom.inside(z) ? dist : -dist;
  return p;
}

double signed_distance(const Domain& dom, const Point& z) { return project_to_boundary(dom, z).lambda; }

Projection nearest_boundary_point(const Domain& dom, const Point& z) {
  const Projection p = project_to_boundary(dom, z);
  const double tau = tubular_radius(dom);
  if (std::abs(p.lambda) >= tau) {
    std::ostringstream os;
    os << "|signed distance| = " << std::abs(p.lambda) << " is not below the tubular radius " << tau;
    throw Error(ErrorKind::kNotInTube, os.str());
  }
  return p;
}

double curvature_at(const Domain& dom, double s) { return dom.curvature(s); }

double tubular_radius(const Domain& dom) {
  const double cached = dom.tau_cache_.load();
  if (cached > 0.0) return cached;

  constexpr int kSamples = 4096;
  std::vector<Point> pts(kSamples), nrm(kSamples);
  double kmax = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double s = kTwoPi * i / kSamples;
    if (!(dom.speed(s) > 1e-12)) throw Error(ErrorKind::kDegenerateBoundary, "boundary speed vanishes");
    pts[i] = dom.gamma(s);
    nrm[i] = dom.normal(s);
    kmax = std::max(kmax, std::abs(dom.curvature(s)));
  }
  if (!std::isfinite(kmax)) throw Error(ErrorKind::kDegenerateBoundary, "curvature is unbounded");

  // A normal segment of length t from x meets the boundary again at y when
  // t >= |y - x|^2 / (2 (y - x) . n_x); the infimum over pairs bounds the reach.
  double pair_bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples; ++i) {
    for (int j = 0; j < kSamples; ++j) {
      if (j == i) continue;
      const Point d = sub(pts[j], pts[i]);
      const double proj = std::abs(dot(d, nrm[i]));
      if (proj <= 0.0) continue;
      pair_bound = std::min(pair_bound, dot(d, d) / (2.0 * proj));
    }
  }
  const double tau = std::min(kmax > 0.0 ? 1.0 / kmax : std::numeric_limits<double>::infinity(), pair_bound);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::kDegenerateBoundary, "no positive tubular radius");
  dom.tau_cache_.store(tau);
  return tau;
}

double boundary_integral(const Domain& dom, const std::function<double(const Point&)>& g, int nodes) {
  if (nodes < 3) throw Error(ErrorKind::kInvalidArgument, "boundary quadrature needs at least 3 nodes");
  const double ds = kTwoPi / nodes;
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double s = i * ds;
    sum += g(dom.gamma(s)) * dom.speed(s);
  }
  return sum * ds;
}

double tube_integral(const Domain& dom, double t, const std::function<double(const Point&)>& F,
                     int boundary_nodes) {
  const double tau = tubular_radius(dom);
  if (!(t > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tube half-width must be positive");
  if (t > tau) {
    std::ostringstream os;
    os << "t = " << t << " exceeds the tubular radius " << tau;
    throw Error(ErrorKind::kTubeTooWide, os.str());
  }
  const QuadratureRule across = gauss_legendre_panels(-t, t, 4, 16);
  const double ds = kTwoPi / boundary_nodes;
  double sum = 0.0;
  for (int i = 0; i < boundary_nodes; ++i) {
    const double s = i * ds;
    const Point u = dom.gamma(s);
    const Point n = dom.normal(s);
    const double kappa = dom.curvature(s);
    double inner = 0.0;
    for (std::size_t q = 0; q < across.size(); ++q) {
      const double lam = across.nodes[q];
      inner += across.weights[q] * F({u[0] + lam * n[0], u[1] + lam * n[1]}) * (1.0 - lam * kappa);
    }
    sum += inner * dom.speed(s);
  }
  return sum * ds;
}

RadialFunction::RadialFunction(const Domain& dom, int table_size) : table_(table_size) {
  const Point c = dom.star_center();
  // unwrapped polar angle of gamma(s) - c on a dense parameter grid
  const int dense = std::max(table_size, 4096);
  std::vector<double> s_grid(dense + 1), phi(dense + 1);
  double prev_angle = 0.0;
  for (int i = 0; i <= dense; ++i) {
    const double s = kTwoPi * i / dense;
    const Point d = sub(dom.gamma(s), c);
    if (!(cross(d, dom.dgamma(s)) > 0.0)) {
      throw Error(ErrorKind::kNotStarShaped, dom.describe() + " is not star-shaped about its centre");
    }
    double a = std::atan2(d[1], d[0]);
    if (i > 0) {
      while (a - prev_angle > std::numbers::pi) a -= kTwoPi;
      while (a - prev_angle < -std::numbers::pi) a += kTwoPi;
    }
    s_grid[i] = s;
    phi[i] = a;
    prev_angle = a;
  }
  const double phi0 = phi[0];

  min_ = std::numeric_limits<double>::infinity();
  max_ = 0.0;
  for (int j = 0; j < table_size; ++j) {
    // angle theta_j = 2 pi j / T, lifted into [phi0, phi0 + 2 pi)
    double theta = kTwoPi * j / table_size;
    while (theta < phi0) theta += kTwoPi;
    while (theta >= phi0 + kTwoPi) theta -= kTwoPi;
    const auto it = std::upper_bound(phi.begin(), phi.end(), theta);
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - phi.begin()), 1, dense);
    double s = s_grid[k - 1] + (theta - phi[k - 1]) / (phi[k] - phi[k - 1]) * (s_grid[k] - s_grid[k - 1]);
    for (int iter = 0; iter < 30; ++iter) {
      const Point d = sub(dom.gamma(s), c);
      const double f = std::remainder(std::atan2(d[1], d[0]) - theta, kTwoPi);
      const double step = f * dot(d, d) / cross(d, dom.dgamma(s));
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    table_[j] = norm(sub(dom.gamma(s), c));
    min_ = std::min(min_, table_[j]);
    max_ = std::max(max_, table_[j]);
  }
}

double RadialFunction::operator()(double theta) const {
  const int n = static_cast<int>(table_.size());
  const double u = wrap_angle(theta) / kTwoPi * n;
  const double base = std::floor(u);
  LagrangeStencil st;
  lagrange_stencil(u - base + 3.0, 0.0, 1.0, 8, 8, st);
  double v = 0.0;
  for (int k = 0; k < 8; ++k) {
    const long idx = static_cast<long>(base) - 3 + k;
    v += st.weight[k] * table_[((idx % n) + n) % n];
  }
  return v;
}

}  // namespace szl
