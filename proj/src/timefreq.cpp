#include "szegolab/timefreq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "szegolab/error.hpp"
#include "szegolab/special.hpp"

namespace szl {
namespace {

constexpr double kPi = std::numbers::pi;

double norm_of(const Point& p) { return std::hypot(p[0], p[1]); }

Point unit(const Point& omega) {
  const double len = norm_of(omega);
  if (!(len > 0.0)) throw Error(ErrorKind::kInvalidArgument, "direction must be non-zero");
  if (std::abs(len - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidArgument, "direction must be a unit vector");
  }
  return omega;
}

// Cumulative integral of samples f on a uniform grid, starting from zero:
// four-point (Simpson 3/8-family) interior rule, trapezoid on the end cells.
std::vector<cplx> cumulative_integral(const std::vector<cplx>& f, double step) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n, cplx(0.0));
  for (std::size_t k = 1; k < n; ++k) {
    cplx cell;
    if (k >= 2 && k + 1 < n) {
      cell = step * (-f[k - 2] + 13.0 * f[k - 1] + 13.0 * f[k] - f[k + 1]) / 24.0;
    } else {
      cell = 0.5 * step * (f[k - 1] + f[k]);
    }
    out[k] = out[k - 1] + cell;
  }
  return out;
}

// Fills grid-aligned Q values and tail metadata from a cumulative profile on an
// extended index range [first, first + ext.size()) of the lambda grid.
ProfileQ assemble_profile(const Point& omega, const LambdaGrid& lambdas, long first,
                          const std::vector<cplx>& ext) {
  ProfileQ Q;
  Q.omega = omega;
  Q.grid = lambdas;
  Q.values.resize(lambdas.size());
  for (int i = 0; i < lambdas.size(); ++i) Q.values[i] = ext[static_cast<std::size_t>(i - first)];
  Q.limit_minus = ext.front();
  Q.limit_plus = ext.back();
  double clamp = 0.0;
  for (std::size_t k = 0; k < ext.size(); ++k) {
    const double lam = lambdas.at(static_cast<int>(first + static_cast<long>(k)));
    const cplx limit = lam < 0.0 ? Q.limit_minus : Q.limit_plus;
    if (std::abs(ext[k] - limit) >= 1e-12) clamp = std::max(clamp, std::abs(lam));
  }
  Q.tail_clamp = clamp;
  return Q;
}

}  // namespace

Window gaussian_window() {
  Window w;
  const double c = std::pow(kPi, -0.25);
  w.eval = [c](double x) { return cplx(c * std::exp(-0.5 * x * x), 0.0); };
  w.l2_norm = 1.0;
  w.decay_hint = 9.0;
  w.name = "gaussian";
  return w;
}

Window hermite_window(int k) {
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "Hermite index must be non-negative");
  Window w;
  w.eval = [k](double x) { return cplx(hermite_function(k, x), 0.0); };
  w.l2_norm = 1.0;
  w.decay_hint = std::sqrt(2.0 * k + 1.0) + 9.0;
  w.name = "hermite(" + std::to_string(k) + ")";
  return w;
}

Window sampled_window(double x0, double dx, std::vector<cplx> values, std::string name) {
  if (values.size() < 8 || !(dx > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sampled window needs >= 8 samples and dx > 0");
  }
  const int n = static_cast<int>(values.size());
  auto data = std::make_shared<std::vector<cplx>>(std::move(values));
  Window w;
  w.eval = [x0, dx, n, data](double x) {
    LagrangeStencil st;
    if (!lagrange_stencil(x, x0, dx, n, 8, st)) return cplx(0.0);
    cplx acc = 0.0;
    for (int k = 0; k < 8; ++k) acc += st.weight[k] * (*data)[st.start + k];
    return acc;
  };
  w.decay_hint = std::max(std::abs(x0), std::abs(x0 + (n - 1) * dx));
  w.name = std::move(name);
  w.l2_norm = l2_norm(w);
  return w;
}

double l2_norm(const Window& phi) {
  const double D = phi.decay_hint;
  const int n = std::max(2000, static_cast<int>(std::ceil(2.0 * D / 0.01)));
  const double dx = 2.0 * D / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * std::norm(phi(-D + i * dx));
  }
  return std::sqrt(sum * dx);
}

cplx PhaseWeight::operator()(double x, double xi) const {
  if (closed_form) return closed_form(x, xi);
  return interpolate(grid, samples, x, xi);
}

GridSpec default_wigner_grid(const Window& phi2, const Window& phi1) {
  GridSpec g;
  g.half_extent = std::max(phi2.decay_hint, phi1.decay_hint) + 2.0;
  g.n = 512;
  return g;
}

PhaseWeight wigner(const Window& phi2, const Window& phi1, const GridSpec& grid, bool normalise) {
  const int n = grid.n;
  if (n < 8 || (n & (n - 1)) != 0) throw Error(ErrorKind::kInvalidArgument, "grid size must be a power of two");
  const double h = grid.spacing();
  const double dt = 2.0 * kPi / (n * h);
  const double sign_n2 = ((n / 2) % 2 == 0) ? 1.0 : -1.0;

  PhaseWeight W;
  W.grid = grid;
  W.samples.assign(grid.size(), cplx(0.0));
  W.provenance = "wigner(" + phi2.name + ", " + phi1.name + ")";

  FftPlan plan(n, FftDirection::kForward);
  std::vector<cplx> buf(n);
  double f_peak = 0.0;
  double f_edge = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    for (int m = 0; m < n; ++m) {
      const double t = (m - n / 2) * dt;
      const cplx f = phi2(x + 0.5 * t) * std::conj(phi1(x - 0.5 * t));
      f_peak = std::max(f_peak, std::abs(f));
      if (m == 0 || m == n - 1) f_edge = std::max(f_edge, std::abs(f));
      const double parity = (m % 2 == 0) ? 1.0 : -1.0;
      buf[m] = parity * f * std::polar(1.0, -t * grid.center[1]);
    }
    plan.execute(buf.data());
    for (int b = 0; b < n; ++b) {
      const double parity = (b % 2 == 0) ? 1.0 : -1.0;
      W.samples[grid.index(i, b)] = (dt / (2.0 * kPi)) * sign_n2 * parity * buf[b];
    }
  }

  double w_peak = 0.0;
  double w_edge = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(W.samples[grid.index(i, j)]);
      w_peak = std::max(w_peak, a);
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) w_edge = std::max(w_edge, a);
    }
  }
  if (f_edge > 1e-10 * f_peak || w_edge > 1e-10 * w_peak) {
    std::ostringstream os;
    os << "Wigner grid does not contain the windows: relative edge level " << std::max(f_edge / f_peak, w_edge / w_peak);
    throw Error(ErrorKind::kGridTooCoarse, os.str());
  }

  cplx integral = 0.0;
  double max_imag = 0.0;
  for (const auto& v : W.samples) {
    integral += v;
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  integral *= h * h;
  if (normalise) {
    if (std::abs(integral) < 1e-12) {
      throw Error(ErrorKind::kInvalidArgument, "cannot normalise a Wigner distribution with zero integral");
    }
    for (auto& v : W.samples) v /= integral;
    max_imag /= std::abs(integral);
    integral = 1.0;
  }
  W.integral = integral;
  W.real_valued = max_imag < 1e-12;

  double decay = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(W.samples[grid.index(i, j)]);
      const double rad = std::hypot(grid.x(i), grid.xi(j));
      for (int k = 0; k < 3; ++k) W.moments[k] += a * std::pow(rad, k) * h * h;
      if (a > 1e-14 * w_peak) decay = std::max(decay, rad);
    }
  }
  W.decay_radius = decay + h;
  return W;
}

PhaseWeight gaussian_phase_weight() {
  PhaseWeight W;
  W.closed_form = [](double x, double xi) { return cplx(std::exp(-x * x - xi * xi) / kPi, 0.0); };
  W.integral = 1.0;
  W.moments = {1.0, 0.5 * std::sqrt(kPi), 1.0};
  W.real_valued = true;
  W.decay_radius = 6.5;
  W.grid.half_extent = 8.0;
  W.grid.n = 256;
  W.provenance = "gaussian (closed form)";
  return W;
}

cplx ProfileQ::operator()(double lambda) const {
  if (lambda < grid.lo) return limit_minus;
  if (lambda > grid.hi) return limit_plus;
  LagrangeStencil st;
  lagrange_stencil(lambda, grid.lo, grid.step(), grid.size(), 4, st);
  cplx acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += st.weight[k] * values[st.start + k];
  return acc;
}

double ProfileQ::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

ProfileQ profile_q_halfplane(const PhaseWeight& W, Point omega, const LambdaGrid& lambdas) {
  omega = unit(omega);
  const Point perp{-omega[1], omega[0]};
  const double step = lambdas.step();
  const double S = std::max({std::abs(lambdas.lo), std::abs(lambdas.hi), W.decay_radius});
  const long first = static_cast<long>(std::floor((-S - lambdas.lo) / step));
  const long last = static_cast<long>(std::ceil((S - lambdas.lo) / step));

  const double T = W.decay_radius;
  const double dt = W.closed_form ? 0.05 : std::min(0.05, W.grid.spacing());
  const int nt = static_cast<int>(std::ceil(2.0 * T / dt));
  const double ht = 2.0 * T / nt;

  // The projection is smooth on the unit scale: evaluate it every kStride
  // lambda steps and interpolate to the fine grid.
  constexpr int kStride = 8;
  const long coarse_first = first - 4 * kStride;
  const int coarse_n = static_cast<int>((last - first) / kStride + 9);
  std::vector<cplx> coarse(coarse_n);
  for (int c = 0; c < coarse_n; ++c) {
    const double s = lambdas.lo + (coarse_first + static_cast<long>(c) * kStride) * step;
    cplx acc = 0.0;
    if (std::abs(s) <= T) {
      for (int m = 0; m <= nt; ++m) {
        const double t = -T + m * ht;
        const double w = (m == 0 || m == nt) ? 0.5 : 1.0;
        acc += w * W(s * omega[0] + t * perp[0], s * omega[1] + t * perp[1]);
      }
    }
    coarse[c] = acc * ht;
  }
  std::vector<cplx> R(static_cast<std::size_t>(last - first + 1));
  for (long k = first; k <= last; ++k) {
    LagrangeStencil st;
    lagrange_stencil(static_cast<double>(k - coarse_first) / kStride, 0.0, 1.0, coarse_n, 8, st);
    cplx acc = 0.0;
    for (int j = 0; j < 8; ++j) acc += st.weight[j] * coarse[st.start + j];
    R[static_cast<std::size_t>(k - first)] = acc;
  }
  const auto cum = cumulative_integral(R, step);
  return assemble_profile(omega, lambdas, first, cum);
}

std::vector<cplx> hermite_coefficients(const Window& phi, int K) {
  if (K < 1) throw Error(ErrorKind::kInvalidArgument, "basis size must be positive");
  const double D = phi.decay_hint;
  const double dx = std::min(0.02, kPi / (2.0 * (std::sqrt(2.0 * K + 1.0) + 10.0)));
  const int n = static_cast<int>(std::ceil(2.0 * D / dx));
  const double hx = 2.0 * D / n;
  std::vector<cplx> c(K, cplx(0.0));
  std::vector<double> hk(K);
  for (int i = 0; i <= n; ++i) {
    const double x = -D + i * hx;
    const cplx v = phi(x);
    if (v == cplx(0.0)) continue;
    hermite_functions(x, hk);
    const double w = (i == 0 || i == n) ? 0.5 * hx : hx;
    for (int k = 0; k < K; ++k) c[k] += w * v * hk[k];
  }
  return c;
}

Window frft(const Window& phi, Point omega, int K) {
  omega = unit(omega);
  const double theta = std::atan2(omega[1], omega[0]);
  auto coeffs = hermite_coefficients(phi, K);

  double tail = 0.0;
  for (int k = std::max(0, K - 4); k < K; ++k) tail = std::max(tail, std::abs(coeffs[k]));
  double captured = 0.0;
  for (const auto& c : coeffs) captured += std::norm(c);
  const double missing = std::max(0.0, phi.l2_norm * phi.l2_norm - captured);
  if (tail > 1e-10 || missing > 1e-12) {
    std::ostringstream os;
    os << "Hermite expansion of " << phi.name << " is truncated at index " << K << " (tail coefficient " << tail
       << ", missing squared norm " << missing << ")";
    throw Error(ErrorKind::kBasisTooSmall, os.str());
  }
  int used = K;
  while (used > 1 && std::abs(coeffs[used - 1]) < 1e-17) --used;
  coeffs.resize(used);
  for (int k = 0; k < used; ++k) coeffs[k] *= std::polar(1.0, -k * theta);

  auto data = std::make_shared<std::vector<cplx>>(std::move(coeffs));
  Window w;
  w.eval = [data](double x) {
    std::vector<double> hk(data->size());
    hermite_functions(x, hk);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < hk.size(); ++k) acc += (*data)[k] * hk[k];
    return acc;
  };
  w.decay_hint = std::max(phi.decay_hint, std::sqrt(2.0 * used + 1.0) + 9.0);
  w.l2_norm = phi.l2_norm;
  std::ostringstream os;
  os << "frft(" << phi.name << ", theta=" << theta << ")";
  w.name = os.str();
  return w;
}

ProfileQ profile_q_frft(const Window& phi2, const Window& phi1, Point omega, const LambdaGrid& lambdas, int K) {
  omega = unit(omega);
  const Window f2 = frft(phi2, omega, K);
  const Window f1 = frft(phi1, omega, K);
  const double step = lambdas.step();
  const double S = std::max({std::abs(lambdas.lo), std::abs(lambdas.hi), f2.decay_hint, f1.decay_hint});
  const long first = static_cast<long>(std::floor((-S - lambdas.lo) / step));
  const long last = static_cast<long>(std::ceil((S - lambdas.lo) / step));
  std::vector<cplx> density(static_cast<std::size_t>(last - first + 1));
  for (long k = first; k <= last; ++k) {
    const double eta = lambdas.lo + k * step;
    density[static_cast<std::size_t>(k - first)] = f2(eta) * std::conj(f1(eta));
  }
  const auto cum = cumulative_integral(density, step);
  return assemble_profile(omega, lambdas, first, cum);
}

namespace {

void require_real(const ProfileQ& Q) {
  const double im = std::max({Q.max_imag(), std::abs(Q.limit_plus.imag()), std::abs(Q.limit_minus.imag())});
  if (im > 1e-12) {
    std::ostringstream os;
    os << "profile has imaginary part " << im;
    throw Error(ErrorKind::kComplexProfile, os.str());
  }
}

// Root of Q - delta inside grid cell [i, i+1] by bisection on the cubic interpolant.
double locate_crossing(const ProfileQ& Q, int i, double delta) {
  double a = Q.grid.at(i), b = Q.grid.at(i + 1);
  double fa = Q(a).real() - delta;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = Q(m).real() - delta;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double counting_profile_g(const ProfileQ& Q, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::kInvalidArgument, "delta must lie in (0, 1)");
  require_real(Q);
  const int n = Q.grid.size();

  // two neighbouring samples within 1e-9 of delta span more than 1e-6
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(Q.values[i].real() - delta) < 1e-9 && std::abs(Q.values[i + 1].real() - delta) < 1e-9) {
      std::ostringstream os;
      os << "profile is flat at level " << delta << " near lambda = " << Q.grid.at(i);
      throw Error(ErrorKind::kFlatCrossing, os.str());
    }
  }
  if (Q.values.front().real() >= delta || Q.values.back().real() <= delta) {
    throw Error(ErrorKind::kInvalidArgument, "profile does not cross delta inside the lambda grid");
  }

  std::vector<double> breaks{Q.grid.lo, Q.grid.hi};
  if (Q.grid.lo < 0.0 && Q.grid.hi > 0.0) breaks.push_back(0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double a = Q.values[i].real() - delta;
    const double b = Q.values[i + 1].real() - delta;
    if ((a > 0.0) != (b > 0.0)) breaks.push_back(locate_crossing(Q, i, delta));
  }
  std::sort(breaks.begin(), breaks.end());

  double above_left = 0.0;   // |{lambda <= 0 : Q > delta}|
  double below_right = 0.0;  // |{lambda >= 0 : Q < delta}|
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    if (b <= a) continue;
    const double q = Q(0.5 * (a + b)).real();
    if (b <= 0.0 && q > delta) above_left += b - a;
    if (a >= 0.0 && q < delta) below_right += b - a;
  }
  return above_left - below_right;
}

double counting_profile_g_monotone(const ProfileQ& Q, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::kInvalidArgument, "delta must lie in (0, 1)");
  require_real(Q);
  double a = Q.grid.lo, b = Q.grid.hi;
  if (Q(a).real() >= delta || Q(b).real() <= delta) {
    throw Error(ErrorKind::kInvalidArgument, "profile does not cross delta inside the lambda grid");
  }
  while (b - a > 1e-15 * std::max(1.0, std::abs(a))) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if (Q(m).real() < delta) {
      a = m;
    } else {
      b = m;
    }
  }
  return -0.5 * (a + b);
}

}  // namespace szl
