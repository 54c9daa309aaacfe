#include "szegolab/special.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "szegolab/error.hpp"

namespace szl {
namespace {

template <unsigned N>
QuadratureRule expand_symmetric_rule(double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  QuadratureRule rule;
  rule.nodes.reserve(N);
  rule.weights.reserve(N);
  // boost stores the non-negative half of a symmetric rule
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    rule.nodes.push_back(mid - half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(mid + half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
  return rule;
}

constexpr double kRescaleHigh = 1e150;
constexpr double kRescaleLog = 345.38776394910684;  // log(1e150)

}  // namespace

QuadratureRule gauss_legendre(int order, double a, double b) {
  switch (order) {
    case 4: return expand_symmetric_rule<4>(a, b);
    case 6: return expand_symmetric_rule<6>(a, b);
    case 8: return expand_symmetric_rule<8>(a, b);
    case 10: return expand_symmetric_rule<10>(a, b);
    case 12: return expand_symmetric_rule<12>(a, b);
    case 16: return expand_symmetric_rule<16>(a, b);
    case 20: return expand_symmetric_rule<20>(a, b);
    default:
      throw Error(ErrorKind::kInvalidArgument,
                  "unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

QuadratureRule gauss_legendre_panels(double a, double b, int panels, int order) {
  if (panels < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one panel");
  const QuadratureRule ref = gauss_legendre(order, 0.0, 1.0);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * ref.size());
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double left = a + p * width;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      rule.nodes.push_back(left + width * ref.nodes[i]);
      rule.weights.push_back(width * ref.weights[i]);
    }
  }
  return rule;
}

void hermite_functions(double x, std::span<double> out) {
  if (out.empty()) return;
  // value_k = f_k * exp(log_scale)
  double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = std::exp(log_scale);
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleHigh) {
      cur /= kRescaleHigh;
      prev /= kRescaleHigh;
      log_scale += kRescaleLog;
    }
    out[k + 1] = cur * std::exp(log_scale);
  }
}

double hermite_function(int k, double x) {
  std::vector<double> values(static_cast<std::size_t>(k) + 1);
  hermite_functions(x, values);
  return values.back();
}

void laguerre_functions(int m, double y, std::span<double> out) {
  if (out.empty()) return;
  const double md = m;
  if (y <= 0.0) {
    // only the m = 0 functions are non-zero at the origin: f_k(0) = 1
    for (auto& v : out) v = (m == 0) ? 1.0 : 0.0;
    return;
  }
  double log_scale = 0.5 * md * std::log(y) - 0.5 * y - 0.5 * std::lgamma(md + 1.0);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = std::exp(log_scale);
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double next = ((2.0 * kk + 1.0 + md - y) * cur - std::sqrt(kk * (kk + md)) * prev) /
                        std::sqrt((kk + 1.0) * (kk + 1.0 + md));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleHigh) {
      cur /= kRescaleHigh;
      prev /= kRescaleHigh;
      log_scale += kRescaleLog;
    }
    out[k + 1] = cur * std::exp(log_scale);
  }
}

bool lagrange_stencil(double x, double origin, double spacing, int n, int order,
                      LagrangeStencil& out) {
  if (order < 2 || order > LagrangeStencil::kMaxOrder || order % 2 != 0 || n < order) {
    throw Error(ErrorKind::kInvalidArgument, "bad Lagrange stencil order");
  }
  const double u = (x - origin) / spacing;
  if (u < 0.0 || u > n - 1) return false;
  int start = static_cast<int>(std::floor(u)) - order / 2 + 1;
  start = std::clamp(start, 0, n - order);
  out.start = start;
  out.order = order;
  const double t = u - start;  // position in stencil coordinates 0..order-1
  for (int j = 0; j < order; ++j) {
    double w = 1.0;
    for (int k = 0; k < order; ++k) {
      if (k != j) w *= (t - k) / static_cast<double>(j - k);
    }
    out.weight[j] = w;
  }
  return true;
}

}  // namespace szl
