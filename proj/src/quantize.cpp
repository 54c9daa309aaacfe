#include "szegolab/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>

#include "szegolab/error.hpp"
#include "szegolab/fft.hpp"
#include "szegolab/special.hpp"

namespace szl {

namespace {

constexpr double kPi = std::numbers::pi;

// Radial quadrature for the ring decomposition.
constexpr double kRingPanel = 0.2;
constexpr int kRingOrder = 16;
// Extra radius beyond the classical turning point of h_{K-1}.
constexpr double kRingMargin = 9.0;

double border_max(const SymbolGrid& q) {
  const GridSpec& g = q.grid;
  double m = 0.0;
  for (int k = 0; k < g.n; ++k) {
    m = std::max({m, std::abs(q.at(0, k)), std::abs(q.at(g.n - 1, k)), std::abs(q.at(k, 0)),
                  std::abs(q.at(k, g.n - 1))});
  }
  return m;
}

double hermitian_tolerance(const Eigen::MatrixXcd& M) {
  return 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff());
}

void require_hermitian(const OperatorMatrix& M, const char* what) {
  const double defect = hermitian_defect(M);
  if (defect > hermitian_tolerance(M.data)) {
    std::ostringstream msg;
    msg << what << " needs a Hermitian matrix; max |M - M*| = " << defect;
    throw Error(ErrorKind::kNonHermitian, msg.str());
  }
}

}  // namespace

OperatorMatrix op_hermite(const SymbolGrid& q, int K) {
  if (K < 1) throw Error(ErrorKind::kInvalidArgument, "basis size must be positive");
  const GridSpec& g = q.grid;
  validate(g);
  if (q.values.size() != g.size()) throw Error(ErrorKind::kInvalidArgument, "symbol samples do not match grid");

  const double rho_max = std::sqrt(2.0 * K + 1.0) + kRingMargin;
  const double x_last = g.x(g.n - 1), xi_last = g.xi(g.n - 1);
  const double inner_reach = std::min({-g.x0(), x_last, -g.xi0(), xi_last});
  const double border = border_max(q);
  if (rho_max > inner_reach && border > 1e-10) {
    std::ostringstream msg;
    msg << "Hermite basis of size " << K << " reaches radius " << rho_max << " but the symbol grid ends at "
        << inner_reach << " with border level " << border;
    throw Error(ErrorKind::kBasisOverflow, msg.str());
  }
  const double outer_reach = std::hypot(std::max(-g.x0(), x_last), std::max(-g.xi0(), xi_last));

  const auto rule = gauss_legendre_panels(0.0, rho_max, static_cast<int>(std::ceil(rho_max / kRingPanel)), kRingOrder);
  const int rings = static_cast<int>(rule.size());
  const int mmax = K - 1;
  const int width = 2 * mmax + 1;
  const int nth = next_pow2(2 * K + static_cast<int>(std::ceil(16.0 * rho_max)));

  // Angular Fourier modes qt[i][m + mmax] = (2 pi)^{-1} int q exp(-i m theta).
  std::vector<cplx> qt(static_cast<std::size_t>(rings) * width, cplx(0.0));
  std::vector<double> ring_max(rings, 0.0);
  const FftPlan plan(nth, FftDirection::kForward);
#pragma omp parallel
  {
    std::vector<cplx> buf(nth);
#pragma omp for schedule(dynamic)
    for (int i = 0; i < rings; ++i) {
      const double rho = rule.nodes[i];
      if (rho > outer_reach) continue;
      for (int l = 0; l < nth; ++l) {
        const double th = 2.0 * kPi * l / nth;
        buf[l] = q(rho * std::cos(th), rho * std::sin(th));
      }
      plan.execute(buf.data());
      double mx = 0.0;
      cplx* row = qt.data() + static_cast<std::size_t>(i) * width;
      for (int m = -mmax; m <= mmax; ++m) {
        row[m + mmax] = buf[(m + nth) % nth] / static_cast<double>(nth);
        mx = std::max(mx, std::abs(row[m + mmax]));
      }
      ring_max[i] = mx;
    }
  }
  const double qmax = *std::max_element(ring_max.begin(), ring_max.end());
  const double negligible = 1e-15 * std::max(qmax, 1e-300);

  OperatorMatrix out;
  out.data = Eigen::MatrixXcd::Zero(K, K);
  out.basis = BasisKind::kHermite;
  out.provenance = q.meta;

  // M(k, k+m) = 2 (-1)^k int rho f_k^{(m)}(2 rho^2) qt_m(rho) drho and the
  // transposed entry with qt_{-m}.
#pragma omp parallel
  {
    std::vector<double> f(K);
    std::vector<cplx> acc_up(K), acc_down(K);
#pragma omp for schedule(dynamic)
    for (int m = 0; m <= mmax; ++m) {
      double level = 0.0;
      for (int i = 0; i < rings; ++i) {
        const cplx* row = qt.data() + static_cast<std::size_t>(i) * width;
        level = std::max({level, std::abs(row[mmax + m]), std::abs(row[mmax - m])});
      }
      if (level <= negligible) continue;
      const int len = K - m;
      std::span<double> fk(f.data(), len);
      std::fill(acc_up.begin(), acc_up.begin() + len, cplx(0.0));
      std::fill(acc_down.begin(), acc_down.begin() + len, cplx(0.0));
      for (int i = 0; i < rings; ++i) {
        if (ring_max[i] <= negligible) continue;
        const double rho = rule.nodes[i];
        const cplx* row = qt.data() + static_cast<std::size_t>(i) * width;
        const double c = 2.0 * rule.weights[i] * rho;
        const cplx up = c * row[mmax + m], down = c * row[mmax - m];
        laguerre_functions(m, 2.0 * rho * rho, fk);
        for (int k = 0; k < len; ++k) {
          acc_up[k] += up * f[k];
          acc_down[k] += down * f[k];
        }
      }
      for (int k = 0; k < len; ++k) {
        const double s = (k % 2 == 0) ? 1.0 : -1.0;
        out.data(k, k + m) = s * acc_up[k];
        if (m > 0) out.data(k + m, k) = s * acc_down[k];
      }
    }
  }

  // Same quadrature with q = 1.
  std::vector<double> diag(K, 0.0), f(K);
  for (int i = 0; i < rings; ++i) {
    const double rho = rule.nodes[i];
    laguerre_functions(0, 2.0 * rho * rho, f);
    for (int k = 0; k < K; ++k) diag[k] += 2.0 * rule.weights[i] * rho * f[k];
  }
  for (int k = 0; k < K; ++k) {
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    out.identity_defect = std::max(out.identity_defect, std::abs(s * diag[k] - 1.0));
  }
  for (int k = std::max(0, K - 4); k < K; ++k) out.tail_level = std::max(out.tail_level, std::abs(out.data(k, k)));
  return out;
}

OperatorMatrix op_kernel(const SymbolGrid& q) {
  const GridSpec& g = q.grid;
  validate(g);
  const int n = g.n;
  const int N = n / 2;
  const double h = g.spacing();
  const double dx = 2.0 * h;
  const double alpha = 2.0 * h * h;
  const double xi0 = g.xi0();
  const int nd = 2 * N - 1;

  std::vector<cplx> pre(n), post(nd);
  for (int b = 0; b < n; ++b) pre[b] = h * std::polar(1.0, -alpha * b * (N - 1));
  for (int k = 0; k < nd; ++k) post[k] = std::polar(1.0, 2.0 * h * (k - (N - 1)) * xi0) * dx / (2.0 * kPi);

  OperatorMatrix out;
  out.data = Eigen::MatrixXcd::Zero(N, N);
  out.basis = BasisKind::kPositionGrid;
  out.x0 = g.x0();
  out.spacing = dx;
  out.provenance = q.meta;

  const ChirpZ cz(n, nd, alpha);
#pragma omp parallel
  {
    std::vector<cplx> in(n), res(nd);
#pragma omp for schedule(dynamic)
    for (int a = 0; a <= n - 2; ++a) {
      for (int b = 0; b < n; ++b) in[b] = q.at(a, b) * pre[b];
      cz.apply(in.data(), res.data());
      // i + j = a, i - j = d
      for (int d = -(N - 1); d <= N - 1; ++d) {
        if (((a + d) & 1) != 0) continue;
        const int i = (a + d) / 2, j = (a - d) / 2;
        if (i < 0 || j < 0 || i >= N || j >= N) continue;
        out.data(i, j) = res[d + N - 1] * post[d + N - 1];
      }
    }
  }

  const int edge = std::min(8, N / 8);
  double total = 0.0, near_edge = 0.0;
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      const double v = std::norm(out.data(i, j));
      total += v;
      if (i < edge || j < edge || i >= N - edge || j >= N - edge) near_edge += v;
    }
  }
  if (total > 0.0 && near_edge > 1e-8 * total) {
    std::ostringstream msg;
    msg << "kernel carries " << near_edge / total << " of its mass within " << edge << " nodes of the grid edge";
    throw Error(ErrorKind::kAliasedKernel, msg.str());
  }

  // q = 1 on the same grid: sum_b exp(i alpha d b) in closed form.
  std::vector<cplx> one(nd);
  for (int k = 0; k < nd; ++k) {
    const int d = k - (N - 1);
    cplx s;
    if (d == 0) {
      s = static_cast<double>(n);
    } else {
      s = (1.0 - std::polar(1.0, alpha * d * n)) / (1.0 - std::polar(1.0, alpha * d));
    }
    one[k] = h * s * post[k];
  }
  std::vector<double> hk(20);
  Eigen::MatrixXd samples(N, 20);
  for (int i = 0; i < N; ++i) {
    hermite_functions(out.x0 + i * dx, hk);
    for (int k = 0; k < 20; ++k) samples(i, k) = hk[k];
  }
  for (int i = 0; i < N; ++i) {
    Eigen::Matrix<cplx, 1, 20> row = Eigen::Matrix<cplx, 1, 20>::Zero();
    for (int j = 0; j < N; ++j) row += one[i - j + N - 1] * samples.row(j).cast<cplx>();
    for (int k = 0; k < 20; ++k) out.identity_defect = std::max(out.identity_defect, std::abs(row(k) - samples(i, k)));
  }
  return out;
}

int default_basis_size(const Domain& dom, double r) {
  const double s = r * dom.bounding_radius() + 6.0;
  return static_cast<int>(std::ceil(std::ceil(0.5 * s * s) * 1.2));
}

double hermitian_defect(const OperatorMatrix& M) { return (M.data - M.data.adjoint()).cwiseAbs().maxCoeff(); }

cplx trace(const OperatorMatrix& M) { return M.data.trace(); }

double trace_norm(const OperatorMatrix& M) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M.data);
  return svd.singularValues().sum();
}

double op_norm(const OperatorMatrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M.data);
  return svd.singularValues()(0);
}

std::vector<double> eigenvalues(const OperatorMatrix& M) {
  require_hermitian(M, "eigenvalues");
  const Eigen::MatrixXcd H = 0.5 * (M.data + M.data.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

SpectralFunction SpectralFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (coeffs[0] != 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                "spectral function must satisfy f(0) = 0: constant coefficient is " + std::to_string(coeffs[0]));
  }
  SpectralFunction f;
  f.kind_ = Kind::kPolynomial;
  std::ostringstream name;
  name << "poly";
  for (double c : coeffs) name << ' ' << c;
  f.name_ = name.str();
  f.coeffs_ = std::move(coeffs);
  return f;
}

SpectralFunction SpectralFunction::callable(std::function<double(double)> fn, std::string name,
                                            double support_radius) {
  if (!fn) throw Error(ErrorKind::kInvalidArgument, "spectral function is empty");
  if (std::abs(fn(0.0)) > 1e-14) {
    throw Error(ErrorKind::kInvalidArgument, "spectral function must satisfy f(0) = 0: f(0) = " +
                                                 std::to_string(fn(0.0)));
  }
  SpectralFunction f;
  f.kind_ = Kind::kCallable;
  f.fn_ = std::move(fn);
  f.name_ = std::move(name);
  f.support_radius_ = support_radius;
  return f;
}

SpectralFunction SpectralFunction::threshold(double delta) {
  if (!(delta > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "spectral function must satisfy f(0) = 0: threshold must be positive");
  }
  SpectralFunction f = callable([delta](double t) { return t >= delta ? 1.0 : 0.0; },
                                "indicator[" + std::to_string(delta) + ",inf)");
  f.threshold_ = delta;
  return f;
}

double SpectralFunction::operator()(double t) const {
  if (kind_ == Kind::kCallable) return fn_(t);
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
  return v;
}

OperatorMatrix spectral_apply(const OperatorMatrix& M, const SpectralFunction& f, SpectralRoute route) {
  const bool hermitian = hermitian_defect(M) <= hermitian_tolerance(M.data);
  if (route == SpectralRoute::kAuto) route = hermitian ? SpectralRoute::kEigen : SpectralRoute::kHorner;
  OperatorMatrix out = M;
  out.provenance = f.name() + "(" + M.provenance + ")";
  if (route == SpectralRoute::kHorner) {
    if (f.kind() != SpectralFunction::Kind::kPolynomial) {
      throw Error(ErrorKind::kNonHermitian, "a non-polynomial spectral function needs a Hermitian matrix");
    }
    const auto& c = f.coeffs();
    const int K = M.size();
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(K, K) * c.back();
    for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
      R = R * M.data;
      R.diagonal().array() += c[i];
    }
    out.data = std::move(R);
    return out;
  }
  if (!hermitian) {
    throw Error(ErrorKind::kNonHermitian, "eigendecomposition route needs a Hermitian matrix");
  }
  const Eigen::MatrixXcd H = 0.5 * (M.data + M.data.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::VectorXd fv = es.eigenvalues().unaryExpr([&f](double t) { return f(t); });
  out.data = es.eigenvectors() * fv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

double spectral_trace(const OperatorMatrix& M, const SpectralFunction& f) {
  double s = 0.0;
  for (double ev : eigenvalues(M)) s += f(ev);
  return s;
}

CountResult counting(const std::vector<double>& eigs, double delta) {
  CountResult r;
  r.closest_gap = std::numeric_limits<double>::infinity();
  for (double ev : eigs) {
    if (ev >= delta) ++r.count;
    r.closest_gap = std::min(r.closest_gap, std::abs(ev - delta));
  }
  r.near_threshold = r.closest_gap < 1e-9;
  return r;
}

CountResult counting(const OperatorMatrix& M, double delta) { return counting(eigenvalues(M), delta); }

double composition_remainder(const SymbolGrid& q, int n, int K) {
  if (n != 0 && n != 1) throw Error(ErrorKind::kInvalidArgument, "composition order must be 0 or 1");
  double scale = 0.0;
  for (const auto& v : q.values) scale = std::max(scale, std::abs(v));
  if (q.max_imag() > 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorKind::kInvalidArgument, "composition remainder needs a real symbol");
  }
  // c_0 = q^2; the first Moyal term of q with itself vanishes, so c_1 = q^2 too.
  const SymbolGrid q2 = moyal_term(q, q, 0);
  const OperatorMatrix M = op_hermite(q, K);
  const OperatorMatrix M2 = op_hermite(q2, K);
  OperatorMatrix R = M;
  R.data = M.data * M.data - M2.data;
  return trace_norm(R);
}

void write_spectrum_csv(const std::vector<double>& eigs, std::ostream& os) {
  const auto old = os.precision(17);
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < eigs.size(); ++i) os << i << ',' << eigs[i] << '\n';
  os.precision(old);
}

void write_matrix_binary(const OperatorMatrix& M, std::ostream& os) {
  os.write("SZLM", 4);
  const std::int32_t K = M.size();
  const std::int32_t kind = M.basis == BasisKind::kHermite ? 0 : 1;
  os.write(reinterpret_cast<const char*>(&K), sizeof K);
  os.write(reinterpret_cast<const char*>(&kind), sizeof kind);
  os.write(reinterpret_cast<const char*>(M.data.data()),
           static_cast<std::streamsize>(sizeof(cplx) * static_cast<std::size_t>(M.data.size())));
}

}  // namespace szl
