#include "szegolab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "szegolab/error.hpp"

namespace szl {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::kConfig, "field '" + field + "': " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path.empty() ? key : path + "." + key, "wrong type");
  }
}

Point get_point(const json& j, const std::string& key, const std::string& path, Point fallback) {
  const auto v = get<std::vector<double>>(j, key, path, {fallback[0], fallback[1]});
  if (v.size() != 2) fail(path + "." + key, "expected two numbers");
  return {v[0], v[1]};
}

void positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be positive");
}

}  // namespace

DomainPtr DomainSpec::build() const {
  if (kind == "disc") return make_disc(radius, center);
  if (kind == "ellipse") return make_ellipse(a, b);
  if (kind == "star") return make_star(eps, k, radius);
  fail("domain.kind", "unknown domain '" + kind + "'");
}

PhaseWeight WindowSpec::weight() const {
  if (kind == "gaussian") return gaussian_phase_weight();
  if (kind == "hermite") {
    const Window h = hermite_window(k);
    return wigner(h, h, default_wigner_grid(h, h));
  }
  if (kind == "hermite_pair") {
    const Window h2 = hermite_window(k2), h1 = hermite_window(k);
    return wigner(h2, h1, default_wigner_grid(h2, h1));
  }
  if (kind == "squeezed") {
    PhaseWeight W = gaussian_phase_weight();
    const double s = width;
    W.closed_form = [s](double x, double xi) { return cplx(std::exp(-x * x / (s * s) - s * s * xi * xi) / kPi, 0.0); };
    W.decay_radius = 6.5 * std::max(s, 1.0 / s);
    // int |z| W = (4 sqrt(pi))^{-1} int c(theta)^{-3/2} dtheta, c = cos^2/s^2 + s^2 sin^2
    double m1 = 0.0;
    for (int j = 0; j < 256; ++j) {
      const double th = 2.0 * kPi * j / 256, c = std::cos(th), sn = std::sin(th);
      m1 += std::pow(c * c / (s * s) + s * s * sn * sn, -1.5);
    }
    W.moments = {1.0, m1 * (2.0 * kPi / 256) / (4.0 * std::sqrt(kPi)), 0.5 * (s * s + 1.0 / (s * s))};
    W.provenance = describe();
    return W;
  }
  fail("window.kind", "unknown window '" + kind + "'");
}

EdgeProfiles WindowSpec::profiles() const { return EdgeProfiles::from_weight(weight()); }

std::string WindowSpec::describe() const {
  std::ostringstream os;
  if (kind == "hermite") {
    os << "hermite(" << k << ")";
  } else if (kind == "hermite_pair") {
    os << "hermite_pair(" << k2 << "," << k << ")";
  } else if (kind == "squeezed") {
    os << "squeezed(" << width << ")";
  } else {
    os << kind;
  }
  return os.str();
}

RealFn SymbolSpec::build() const {
  if (kind == "constant") {
    const double v = value;
    return [v](const Point&) { return v; };
  }
  if (kind == "gaussian_bump") {
    const double v = value, w2 = width * width;
    const Point c = center;
    return [v, w2, c](const Point& z) {
      const double dx = z[0] - c[0], dy = z[1] - c[1];
      return v * std::exp(-(dx * dx + dy * dy) / w2);
    };
  }
  if (kind == "expression") {
    const auto t = terms;
    return [t](const Point& z) {
      double s = 0.0;
      for (const auto& term : t) {
        double p = 0.0;
        if (term.primitive == "one") p = 1.0;
        else if (term.primitive == "x") p = z[0];
        else if (term.primitive == "xi") p = z[1];
        else if (term.primitive == "r2") p = z[0] * z[0] + z[1] * z[1];
        else if (term.primitive == "gaussian") p = std::exp(-z[0] * z[0] - z[1] * z[1]);
        s += term.coeff * p;
      }
      return s;
    };
  }
  fail("symbol.kind", "unknown symbol '" + kind + "'");
}

std::string SymbolSpec::describe() const {
  std::ostringstream os;
  if (kind == "constant") {
    os << "constant(" << value << ")";
  } else if (kind == "gaussian_bump") {
    os << "gaussian_bump(" << value << "," << width << ")";
  } else {
    os << "expression(";
    for (std::size_t i = 0; i < terms.size(); ++i) os << (i ? "+" : "") << terms[i].coeff << "*" << terms[i].primitive;
    os << ")";
  }
  return os.str();
}

SpectralFunction ModeSpec::function() const {
  if (kind == "counting") return SpectralFunction::threshold(delta);
  return SpectralFunction::polynomial(coeffs);
}

std::string ModeSpec::describe() const {
  std::ostringstream os;
  if (kind == "counting") {
    os << "counting(" << delta << ")";
  } else {
    os << "trace(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
    os << ")";
  }
  return os.str();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, "", {"name", "domain", "window", "symbol", "mode", "r_list", "grid_n", "grid_margin", "basis_size",
                     "sampling", "out_dir", "seed"});
  ExperimentConfig c;
  c.name = get<std::string>(j, "name", "", c.name);

  if (j.contains("domain")) {
    const json& d = j["domain"];
    check_keys(d, "domain", {"kind", "radius", "center", "a", "b", "eps", "k"});
    DomainSpec& s = c.domain;
    s.kind = get<std::string>(d, "kind", "domain", s.kind);
    s.radius = get<double>(d, "radius", "domain", s.radius);
    s.center = get_point(d, "center", "domain", s.center);
    s.a = get<double>(d, "a", "domain", s.a);
    s.b = get<double>(d, "b", "domain", s.b);
    s.eps = get<double>(d, "eps", "domain", s.eps);
    s.k = get<int>(d, "k", "domain", s.k);
    if (s.kind != "disc" && s.kind != "ellipse" && s.kind != "star") fail("domain.kind", "expected disc, ellipse or star");
    positive(s.radius, "domain.radius");
    if (s.kind == "ellipse") {
      positive(s.a, "domain.a");
      positive(s.b, "domain.b");
    }
    if (s.kind == "star") {
      if (!(std::abs(s.eps) < 1.0)) fail("domain.eps", "must satisfy |eps| < 1");
      if (s.k < 1) fail("domain.k", "must be at least 1");
    }
  }

  if (j.contains("window")) {
    const json& w = j["window"];
    check_keys(w, "window", {"kind", "k", "k2", "width"});
    WindowSpec& s = c.window;
    s.kind = get<std::string>(w, "kind", "window", s.kind);
    s.k = get<int>(w, "k", "window", s.k);
    s.k2 = get<int>(w, "k2", "window", s.k2);
    s.width = get<double>(w, "width", "window", s.width);
    if (s.kind != "gaussian" && s.kind != "hermite" && s.kind != "hermite_pair" && s.kind != "squeezed") {
      fail("window.kind", "expected gaussian, hermite, hermite_pair or squeezed");
    }
    if (s.k < 0 || s.k2 < 0) fail("window.k", "Hermite orders must be non-negative");
    positive(s.width, "window.width");
  }

  if (j.contains("symbol")) {
    const json& a = j["symbol"];
    check_keys(a, "symbol", {"kind", "value", "width", "center", "terms"});
    SymbolSpec& s = c.symbol;
    s.kind = get<std::string>(a, "kind", "symbol", s.kind);
    s.value = get<double>(a, "value", "symbol", s.value);
    s.width = get<double>(a, "width", "symbol", s.width);
    s.center = get_point(a, "center", "symbol", s.center);
    if (s.kind != "constant" && s.kind != "gaussian_bump" && s.kind != "expression") {
      fail("symbol.kind", "expected constant, gaussian_bump or expression");
    }
    positive(s.width, "symbol.width");
    if (a.contains("terms")) {
      if (!a["terms"].is_array()) fail("symbol.terms", "expected an array");
      for (std::size_t i = 0; i < a["terms"].size(); ++i) {
        const json& t = a["terms"][i];
        const std::string path = "symbol.terms[" + std::to_string(i) + "]";
        check_keys(t, path, {"primitive", "coeff"});
        SymbolTerm term;
        term.primitive = get<std::string>(t, "primitive", path, "");
        term.coeff = get<double>(t, "coeff", path, 1.0);
        static const std::set<std::string> kPrimitives{"one", "x", "xi", "r2", "gaussian"};
        if (!kPrimitives.count(term.primitive)) fail(path + ".primitive", "expected one, x, xi, r2 or gaussian");
        s.terms.push_back(term);
      }
    }
    if (s.kind == "expression" && s.terms.empty()) fail("symbol.terms", "expression needs at least one term");
  }

  if (j.contains("mode")) {
    const json& m = j["mode"];
    check_keys(m, "mode", {"kind", "delta", "coeffs"});
    ModeSpec& s = c.mode;
    s.kind = get<std::string>(m, "kind", "mode", s.kind);
    s.delta = get<double>(m, "delta", "mode", s.delta);
    s.coeffs = get<std::vector<double>>(m, "coeffs", "mode", s.coeffs);
    if (s.kind == "counting") {
      if (!(s.delta > 0.0)) fail("mode.delta", "spectral function must satisfy f(0) = 0, so the threshold must be positive");
    } else if (s.kind == "trace") {
      if (s.coeffs.empty()) fail("mode.coeffs", "trace mode needs polynomial coefficients");
      if (s.coeffs[0] != 0.0) {
        std::ostringstream msg;
        msg << "spectral function must satisfy f(0) = 0, but the constant coefficient is " << s.coeffs[0];
        fail("mode.coeffs", msg.str());
      }
    } else {
      fail("mode.kind", "expected counting or trace");
    }
  }

  c.r_list = get<std::vector<double>>(j, "r_list", "", c.r_list);
  if (c.r_list.empty()) fail("r_list", "must not be empty");
  for (std::size_t i = 0; i < c.r_list.size(); ++i) {
    positive(c.r_list[i], "r_list[" + std::to_string(i) + "]");
    if (i > 0 && !(c.r_list[i] > c.r_list[i - 1])) fail("r_list", "must be strictly increasing");
  }
  c.grid_n = get<int>(j, "grid_n", "", c.grid_n);
  if (c.grid_n < 64 || (c.grid_n & (c.grid_n - 1)) != 0) fail("grid_n", "must be a power of two >= 64");
  c.grid_margin = get<double>(j, "grid_margin", "", c.grid_margin);
  positive(c.grid_margin, "grid_margin");
  c.basis_size = get<int>(j, "basis_size", "", c.basis_size);
  if (c.basis_size < 0) fail("basis_size", "must be non-negative");
  const std::string sampling = get<std::string>(j, "sampling", "", "boundary_fitted");
  if (sampling == "boundary_fitted") {
    c.sampling = SymbolSampling::kBoundaryFitted;
  } else if (sampling == "pointwise") {
    c.sampling = SymbolSampling::kPointwise;
  } else {
    fail("sampling", "expected boundary_fitted or pointwise");
  }
  c.out_dir = get<std::string>(j, "out_dir", "", c.out_dir);
  c.seed = get<unsigned>(j, "seed", "", c.seed);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace szl
