#pragma once

// The r-sweep pipeline: smoothed symbol, quantisation, measured trace or
// count, and comparison with the two-term prediction.

#include <optional>
#include <string>
#include <vector>

#include "szegolab/asymptotics.hpp"
#include "szegolab/config.hpp"
#include "szegolab/error.hpp"

namespace szl {

struct BuildOptions {
  int grid_n = 1024;
  double grid_margin = 10.0;
  /// 0 selects default_basis_size.
  int basis_size = 0;
  SymbolSampling sampling = SymbolSampling::kBoundaryFitted;

  static BuildOptions from(const ExperimentConfig& c);
};

struct BuiltOperator {
  SymbolGrid symbol;
  OperatorMatrix matrix;
};

/// op[W * (a(./r) chi_{r Omega})] in the Hermite basis.
BuiltOperator build_operator(const Domain& dom, const PhaseWeight& W, const RealFn& a, double r,
                             const BuildOptions& opts);

struct SweepRow {
  double r = 0.0;
  bool ok = false;
  std::string error;
  int basis_size = 0;
  double measured = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
  double identity_defect = 0.0;
  double tail_level = 0.0;
  double symbol_border = 0.0;
  double hermitian_defect = 0.0;
  /// Counting mode: an eigenvalue within 1e-9 of delta.
  bool near_threshold = false;
};

struct PredictResult {
  std::string name;
  std::string description;
  TwoTerm coeffs;
  std::vector<double> r_values;
  std::vector<double> predicted;
};

struct SweepResult {
  PredictResult prediction;
  std::vector<SweepRow> rows;
  std::optional<AsymptoticsReport> fit;
  /// Why the fit is missing or failed; empty when fit is set.
  std::string fit_status;
  /// Set when the fit was attempted and threw.
  bool fit_failed = false;

  int successes() const;
};

/// Everything the pipeline needs, built once from a config.
struct Experiment {
  ExperimentConfig config;
  DomainPtr domain;
  PhaseWeight weight;
  RealFn symbol;
  SpectralFunction f;

  explicit Experiment(ExperimentConfig c);
  EdgeProfiles profiles() const;
  std::string describe() const;
};

PredictResult run_predict(const Experiment& ex);

/// Measures one r. Numerical failures are caught and recorded in the row.
SweepRow measure(const Experiment& ex, double r, const TwoTerm& coeffs);

/// Sequential over r_list, then fit_and_compare on the successful rows when
/// there are at least four.
SweepResult run_sweep(const Experiment& ex);

/// Eigenvalues of T_r, decreasing.
std::vector<double> spectrum_at(const Experiment& ex, double r);

}  // namespace szl
