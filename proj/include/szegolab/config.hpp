#pragma once

// JSON experiment configuration. See README.md for the schema.

#include <string>
#include <vector>

#include "szegolab/asymptotics.hpp"
#include "szegolab/geometry.hpp"
#include "szegolab/quantize.hpp"
#include "szegolab/symbolics.hpp"
#include "szegolab/timefreq.hpp"

namespace szl {

struct DomainSpec {
  std::string kind = "disc";  // disc | ellipse | star
  double radius = 1.0;
  Point center{0.0, 0.0};
  double a = 1.0, b = 1.0;    // ellipse semi-axes
  double eps = 0.0;           // star: radius * (1 + eps cos(k theta))
  int k = 3;

  DomainPtr build() const;
};

struct WindowSpec {
  std::string kind = "gaussian";  // gaussian | hermite | hermite_pair | squeezed
  int k = 0;                      // hermite order; second window of a pair
  int k2 = 0;                     // first window of a hermite pair
  double width = 1.0;             // squeezed gaussian width

  PhaseWeight weight() const;
  EdgeProfiles profiles() const;
  std::string describe() const;
};

struct SymbolTerm {
  std::string primitive;  // one | x | xi | r2 | gaussian
  double coeff = 1.0;
};

struct SymbolSpec {
  std::string kind = "constant";  // constant | gaussian_bump | expression
  double value = 1.0;
  double width = 1.0;
  Point center{0.0, 0.0};
  std::vector<SymbolTerm> terms;

  RealFn build() const;
  bool is_unit() const { return kind == "constant" && value == 1.0; }
  std::string describe() const;
};

struct ModeSpec {
  std::string kind = "counting";  // counting | trace
  double delta = 0.5;
  std::vector<double> coeffs;     // trace: f(t) = sum coeffs[i] t^i

  SpectralFunction function() const;
  std::string describe() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DomainSpec domain;
  WindowSpec window;
  SymbolSpec symbol;
  ModeSpec mode;
  std::vector<double> r_list;
  int grid_n = 1024;
  double grid_margin = 10.0;
  /// 0 selects default_basis_size.
  int basis_size = 0;
  SymbolSampling sampling = SymbolSampling::kBoundaryFitted;
  std::string out_dir = "out";
  unsigned seed = 0;
};

/// Throws ConfigError naming the offending field, or the parse position for
/// malformed JSON.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace szl
