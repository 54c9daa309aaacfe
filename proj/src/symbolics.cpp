#include "szegolab/symbolics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "szegolab/error.hpp"
#include "szegolab/special.hpp"

namespace szl {

namespace {

constexpr double kPi = std::numbers::pi;

// Ramp centre in units of the ramp width, and the extent of the rim band.
constexpr double kRampCentre = 6.0;
constexpr double kBandExtent = 12.0;
// Spreading Gaussians are truncated at this many standard deviations.
constexpr double kSpreadCut = 8.0;
// Deconvolution is skipped where the Gaussian transform drops below this.
constexpr double kDeconvFloor = 1e-13;

double wrapped_frequency(int k, int n, double h) {
  const int kk = k < n / 2 ? k : k - n;
  return 2.0 * kPi * kk / (n * h);
}

double border_max(const GridSpec& g, const std::vector<cplx>& v) {
  double m = 0.0;
  for (int k = 0; k < g.n; ++k) {
    m = std::max({m, std::abs(v[g.index(0, k)]), std::abs(v[g.index(g.n - 1, k)]), std::abs(v[g.index(k, 0)]),
                  std::abs(v[g.index(k, g.n - 1)])});
  }
  return m;
}

// Spectrum of the samples, scaled so that multiplying by (i zeta) and
// inverting gives the derivative.
std::vector<cplx> spectrum(const SymbolGrid& p) {
  std::vector<cplx> s(p.values);
  FftPlan(p.grid.n, p.grid.n, FftDirection::kForward).execute(s.data());
  return s;
}

// Inverse of spectrum() after multiplication by (i zeta_x)^ax (i zeta_xi)^axi.
std::vector<cplx> derivative_from_spectrum(const GridSpec& g, const std::vector<cplx>& s, int ax, int axi) {
  const int n = g.n;
  const double h = g.spacing();
  std::vector<cplx> out(s.size());
  for (int i = 0; i < n; ++i) {
    const double zx = (i == n / 2 && ax % 2 == 1) ? 0.0 : wrapped_frequency(i, n, h);
    for (int j = 0; j < n; ++j) {
      const double zy = (j == n / 2 && axi % 2 == 1) ? 0.0 : wrapped_frequency(j, n, h);
      cplx f = 1.0;
      for (int k = 0; k < ax; ++k) f *= cplx(0.0, zx);
      for (int k = 0; k < axi; ++k) f *= cplx(0.0, zy);
      out[g.index(i, j)] = s[g.index(i, j)] * f;
    }
  }
  FftPlan(n, n, FftDirection::kBackward).execute(out.data());
  const double inv = 1.0 / (static_cast<double>(n) * n);
  for (auto& v : out) v *= inv;
  return out;
}

// Gaussian weights exp(-(x_k - c)^2 / (2 s^2)) / (sqrt(2 pi) s) at the grid
// nodes x_k = origin + k h within the truncation window.
int spread_weights(double c, double origin, double h, int n, double sigma, std::vector<double>& w) {
  const double reach = kSpreadCut * sigma;
  const int lo = std::max(0, static_cast<int>(std::ceil((c - reach - origin) / h)));
  const int hi = std::min(n - 1, static_cast<int>(std::floor((c + reach - origin) / h)));
  w.clear();
  const double norm = 1.0 / (std::sqrt(2.0 * kPi) * sigma);
  for (int k = lo; k <= hi; ++k) {
    const double d = (origin + k * h - c) / sigma;
    w.push_back(norm * std::exp(-0.5 * d * d));
  }
  return lo;
}

}  // namespace

void validate(const GridSpec& g) {
  if (g.n < 8 || (g.n & (g.n - 1)) != 0) {
    throw Error(ErrorKind::kInvalidArgument, "grid size must be a power of two >= 8");
  }
  if (!(g.half_extent > 0.0)) throw Error(ErrorKind::kInvalidArgument, "grid half extent must be positive");
}

cplx interpolate(const GridSpec& g, const std::vector<cplx>& v, double x, double xi) {
  const double h = g.spacing();
  LagrangeStencil sx, sy;
  if (!lagrange_stencil(x, g.x0(), h, g.n, 8, sx)) return 0.0;
  if (!lagrange_stencil(xi, g.xi0(), h, g.n, 8, sy)) return 0.0;
  cplx acc = 0.0;
  for (int a = 0; a < 8; ++a) {
    const cplx* row = v.data() + g.index(sx.start + a, sy.start);
    cplx inner = 0.0;
    for (int b = 0; b < 8; ++b) inner += sy.weight[b] * row[b];
    acc += sx.weight[a] * inner;
  }
  return acc;
}

cplx SymbolGrid::operator()(double x, double xi) const { return interpolate(grid, values, x, xi); }

cplx SymbolGrid::integral() const {
  cplx s = 0.0;
  for (const auto& v : values) s += v;
  const double h = grid.spacing();
  return s * h * h;
}

double SymbolGrid::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

SymbolFn dilate(SymbolFn p, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::kInvalidArgument, "dilation factor must be positive");
  return [p = std::move(p), r](const Point& z) { return p({z[0] / r, z[1] / r}); };
}

SymbolFn dilate(const SymbolGrid& p, double r) {
  auto shared = std::make_shared<const SymbolGrid>(p);
  return dilate(SymbolFn([shared](const Point& z) { return (*shared)(z[0], z[1]); }), r);
}

SymbolGrid sample_symbol(const SymbolFn& p, const GridSpec& grid, std::string meta) {
  validate(grid);
  SymbolGrid out;
  out.grid = grid;
  out.meta = std::move(meta);
  out.values.resize(grid.size());
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) out.values[grid.index(i, j)] = p({grid.x(i), grid.xi(j)});
  }
  out.border_level = border_max(grid, out.values);
  return out;
}

GridSpec default_symbol_grid(const Domain& dom, double r) {
  GridSpec g;
  g.n = 1024;
  g.half_extent = r * dom.bounding_radius() + 10.0;
  return g;
}

SymbolGrid smoothed_symbol(const PhaseWeight& W, const RealFn& a, const Domain& dom, double r,
                           const GridSpec& grid, const SmoothingOptions& opts) {
  validate(grid);
  if (!(r > 0.0)) throw Error(ErrorKind::kInvalidArgument, "dilation factor must be positive");
  const double h = grid.spacing();
  const int pad = static_cast<int>(std::ceil(W.decay_radius / h));
  const int P = next_pow2(grid.n + 2 * pad);
  const int off = (P - grid.n) / 2;
  const double X0 = grid.x0() - off * h;
  const double Y0 = grid.xi0() - off * h;
  const std::size_t PP = static_cast<std::size_t>(P) * P;
  auto at = [P](int p, int q) { return static_cast<std::size_t>(p) * P + q; };

  // Wrapped kernel h^2 W(d h).
  std::vector<cplx> kernel(PP, cplx(0.0));
  const double reach = W.decay_radius + h;
  for (int p = 0; p < P; ++p) {
    const double dx = (p < P / 2 ? p : p - P) * h;
    if (std::abs(dx) > reach) continue;
    for (int q = 0; q < P; ++q) {
      const double dy = (q < P / 2 ? q : q - P) * h;
      if (std::hypot(dx, dy) > reach) continue;
      kernel[at(p, q)] = h * h * W(dx, dy);
    }
  }
  const FftPlan fwd(P, P, FftDirection::kForward);
  fwd.execute(kernel.data());

  std::vector<cplx> field(PP, cplx(0.0));
  std::ostringstream meta;
  meta << "smoothed_symbol r=" << r << " P=" << P;

  if (opts.sampling == SymbolSampling::kPointwise) {
    meta << " sampling=pointwise";
    for (int p = 0; p < P; ++p) {
      for (int q = 0; q < P; ++q) {
        const Point z{(X0 + p * h) / r, (Y0 + q * h) / r};
        if (dom.inside(z)) field[at(p, q)] = a(z);
      }
    }
    fwd.execute(field.data());
  } else {
    const RadialFunction rho(dom);
    const Point c = dom.star_center();
    const double w = opts.ramp_width;
    const double e_mid = kRampCentre * w;
    const bool pure_polar = r * rho.min() < 14.0 * w;
    const double sigma = std::min(4.0 * h, 0.35);
    auto psi = [&](double e) { return 0.5 * std::erfc((e_mid - e) / w); };
    meta << " sampling=boundary-fitted sigma=" << sigma << (pure_polar ? " polar" : " banded");

    // Interior part sampled on the grid.
    if (!pure_polar) {
      const double rmax = r * rho.max();
      for (int p = 0; p < P; ++p) {
        const double vx = X0 + p * h - r * c[0];
        if (std::abs(vx) > rmax) continue;
        for (int q = 0; q < P; ++q) {
          const double vy = Y0 + q * h - r * c[1];
          const double dist = std::hypot(vx, vy);
          if (dist > rmax) continue;
          const double e = r * rho(std::atan2(vy, vx)) - dist;
          if (e <= 0.0) continue;
          const Point z{(X0 + p * h) / r, (Y0 + q * h) / r};
          field[at(p, q)] = psi(e) * a(z);
        }
      }
      fwd.execute(field.data());
    }

    // Rim band: quadrature in (s, e) spread with a Gaussian of width sigma.
    std::vector<cplx> band(PP, cplx(0.0));
    double max_speed = 0.0;
    for (int k = 0; k < 1024; ++k) max_speed = std::max(max_speed, dom.speed(2.0 * kPi * k / 1024));
    const int ns = std::max(64, static_cast<int>(std::ceil(2.0 * kPi * r * max_speed / (0.5 * sigma))));
    const double ds = 2.0 * kPi / ns;
    std::vector<double> wx, wy;
    for (int k = 0; k < ns; ++k) {
      const double s = k * ds;
      const Point g = dom.gamma(s), dg = dom.dgamma(s);
      const Point v{g[0] - c[0], g[1] - c[1]};
      const double R = r * std::hypot(v[0], v[1]);
      const double cross = v[0] * dg[1] - v[1] * dg[0];
      const double extent = pure_polar ? R : kBandExtent * w;
      const auto rule = gauss_legendre_panels(0.0, extent, std::max(1, static_cast<int>(std::ceil(extent / sigma))), 10);
      for (std::size_t m = 0; m < rule.size(); ++m) {
        const double e = rule.nodes[m];
        const double t = 1.0 - e / R;
        const Point z{c[0] + t * v[0], c[1] + t * v[1]};
        const double weight = pure_polar ? 1.0 : 1.0 - psi(e);
        const double mass = ds * rule.weights[m] * r * r * t * cross / R * weight * a(z);
        if (mass == 0.0) continue;
        const int px = spread_weights(r * z[0], X0, h, P, sigma, wx);
        const int py = spread_weights(r * z[1], Y0, h, P, sigma, wy);
        for (std::size_t i = 0; i < wx.size(); ++i) {
          cplx* row = band.data() + at(px + static_cast<int>(i), py);
          const double mx = mass * wx[i];
          for (std::size_t j = 0; j < wy.size(); ++j) row[j] += mx * wy[j];
        }
      }
    }
    fwd.execute(band.data());
    for (int p = 0; p < P; ++p) {
      const double zx = wrapped_frequency(p, P, h);
      for (int q = 0; q < P; ++q) {
        const double zy = wrapped_frequency(q, P, h);
        const double g = std::exp(-0.5 * sigma * sigma * (zx * zx + zy * zy));
        if (g >= kDeconvFloor) field[at(p, q)] += band[at(p, q)] / g;
      }
    }
  }

  for (std::size_t k = 0; k < PP; ++k) field[k] *= kernel[k];
  FftPlan(P, P, FftDirection::kBackward).execute(field.data());
  const double inv = 1.0 / static_cast<double>(PP);

  SymbolGrid out;
  out.grid = grid;
  out.values.resize(grid.size());
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) out.values[grid.index(i, j)] = field[at(i + off, j + off)] * inv;
  }
  out.border_level = border_max(grid, out.values);
  meta << " border=" << out.border_level;
  out.meta = meta.str();
  if (out.border_level > 1e-10) {
    std::ostringstream msg;
    msg << "smoothed symbol reaches " << out.border_level << " on the grid border; enlarge half_extent";
    throw Error(ErrorKind::kGridTooSmall, msg.str());
  }
  return out;
}

SymbolGrid spectral_derivative(const SymbolGrid& p, int axis) {
  if (axis != 0 && axis != 1) throw Error(ErrorKind::kInvalidArgument, "axis must be 0 or 1");
  SymbolGrid out;
  out.grid = p.grid;
  out.values = derivative_from_spectrum(p.grid, spectrum(p), axis == 0 ? 1 : 0, axis == 1 ? 1 : 0);
  out.meta = std::string(axis == 0 ? "d/dx " : "d/dxi ") + p.meta;
  out.border_level = border_max(out.grid, out.values);
  return out;
}

SymbolGrid moyal_term(const SymbolGrid& p, const SymbolGrid& q, int j) {
  if (p.grid.n != q.grid.n || p.grid.half_extent != q.grid.half_extent || p.grid.center != q.grid.center) {
    throw Error(ErrorKind::kInvalidArgument, "moyal_term needs both symbols on the same grid");
  }
  if (j != 0 && j != 1) throw Error(ErrorKind::kInvalidArgument, "moyal_term supports j = 0 and j = 1");
  SymbolGrid out;
  out.grid = p.grid;
  out.values.resize(p.values.size());
  if (j == 0) {
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = p.values[k] * q.values[k];
  } else {
    const auto sp = spectrum(p), sq = spectrum(q);
    const auto px = derivative_from_spectrum(p.grid, sp, 1, 0), pxi = derivative_from_spectrum(p.grid, sp, 0, 1);
    const auto qx = derivative_from_spectrum(q.grid, sq, 1, 0), qxi = derivative_from_spectrum(q.grid, sq, 0, 1);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
      out.values[k] = cplx(0.0, 0.5) * (px[k] * qxi[k] - pxi[k] * qx[k]);
    }
  }
  out.meta = "moyal_term j=" + std::to_string(j);
  out.border_level = border_max(out.grid, out.values);
  return out;
}

SymbolNorms symbol_sup_and_l1(const SymbolGrid& q) {
  static constexpr std::array<std::array<int, 2>, 6> kOrders{{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};
  const auto s = spectrum(q);
  const double h2 = q.grid.spacing() * q.grid.spacing();
  SymbolNorms out;
  for (std::size_t k = 0; k < kOrders.size(); ++k) {
    const auto d = k == 0 ? q.values : derivative_from_spectrum(q.grid, s, kOrders[k][0], kOrders[k][1]);
    double sup = 0.0, l1 = 0.0;
    for (const auto& v : d) {
      sup = std::max(sup, std::abs(v));
      l1 += std::abs(v);
    }
    out.sup[k] = sup;
    out.l1[k] = l1 * h2;
  }
  return out;
}

void write_symbol_csv(const SymbolGrid& q, std::ostream& os) {
  os.precision(17);
  os << "# x0=" << q.grid.x0() << " xi0=" << q.grid.xi0() << " h=" << q.grid.spacing() << " n=" << q.grid.n << "\n";
  os << "x,xi,re,im\n";
  for (int i = 0; i < q.grid.n; ++i) {
    for (int j = 0; j < q.grid.n; ++j) {
      const cplx v = q.at(i, j);
      os << q.grid.x(i) << ',' << q.grid.xi(j) << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
}

}  // namespace szl
