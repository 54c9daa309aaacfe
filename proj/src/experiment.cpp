#include "szegolab/experiment.hpp"

#include <sstream>

namespace szl {

BuildOptions BuildOptions::from(const ExperimentConfig& c) {
  BuildOptions o;
  o.grid_n = c.grid_n;
  o.grid_margin = c.grid_margin;
  o.basis_size = c.basis_size;
  o.sampling = c.sampling;
  return o;
}

BuiltOperator build_operator(const Domain& dom, const PhaseWeight& W, const RealFn& a, double r,
                             const BuildOptions& opts) {
  GridSpec grid;
  grid.n = opts.grid_n;
  grid.half_extent = r * dom.bounding_radius() + opts.grid_margin;
  SmoothingOptions so;
  so.sampling = opts.sampling;
  BuiltOperator out{smoothed_symbol(W, a, dom, r, grid, so), {}};
  const int K = opts.basis_size > 0 ? opts.basis_size : default_basis_size(dom, r);
  out.matrix = op_hermite(out.symbol, K);
  return out;
}

int SweepResult::successes() const {
  int n = 0;
  for (const auto& row : rows) n += row.ok ? 1 : 0;
  return n;
}

Experiment::Experiment(ExperimentConfig c)
    : config(std::move(c)),
      domain(config.domain.build()),
      weight(config.window.weight()),
      symbol(config.symbol.build()),
      f(config.mode.function()) {}

EdgeProfiles Experiment::profiles() const { return EdgeProfiles::from_weight(weight); }

std::string Experiment::describe() const {
  std::ostringstream os;
  os << domain->describe() << "; window " << config.window.describe() << "; symbol " << config.symbol.describe()
     << "; mode " << config.mode.describe();
  return os.str();
}

PredictResult run_predict(const Experiment& ex) {
  PredictResult p;
  p.name = ex.config.name;
  p.description = ex.describe();
  p.coeffs = two_term(ex.symbol, ex.config.symbol.is_unit(), *ex.domain, ex.f, ex.profiles());
  p.r_values = ex.config.r_list;
  for (double r : p.r_values) p.predicted.push_back(predict(p.coeffs, r));
  return p;
}

SweepRow measure(const Experiment& ex, double r, const TwoTerm& coeffs) {
  SweepRow row;
  row.r = r;
  row.predicted = predict(coeffs, r);
  try {
    const BuiltOperator op = build_operator(*ex.domain, ex.weight, ex.symbol, r, BuildOptions::from(ex.config));
    const OperatorMatrix& M = op.matrix;
    row.basis_size = M.size();
    row.identity_defect = M.identity_defect;
    row.tail_level = M.tail_level;
    row.symbol_border = op.symbol.border_level;
    row.hermitian_defect = hermitian_defect(M);
    if (ex.f.is_threshold()) {
      const CountResult c = counting(M, ex.f.threshold_value());
      row.measured = c.count;
      row.near_threshold = c.near_threshold;
    } else {
      // Horner handles the complex weights of unequal window pairs
      const cplx t = trace(spectral_apply(M, ex.f));
      if (std::abs(t.imag()) > 1e-8 * std::max(1.0, std::abs(t.real()))) {
        std::ostringstream msg;
        msg << "trace has imaginary part " << t.imag();
        throw Error(ErrorKind::kComplexProfile, msg.str());
      }
      row.measured = t.real();
    }
    row.residual = row.measured - row.predicted;
    row.ok = true;
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

SweepResult run_sweep(const Experiment& ex) {
  SweepResult res;
  res.prediction = run_predict(ex);
  for (double r : ex.config.r_list) res.rows.push_back(measure(ex, r, res.prediction.coeffs));

  std::vector<double> r_ok, m_ok;
  for (const auto& row : res.rows) {
    if (row.ok) {
      r_ok.push_back(row.r);
      m_ok.push_back(row.measured);
    }
  }
  if (r_ok.size() < 4) {
    res.fit_status = "skipped: " + std::to_string(r_ok.size()) + " successful r values, the fit needs 4";
    return res;
  }
  try {
    res.fit = fit_and_compare(r_ok, m_ok, res.prediction.coeffs.A0, res.prediction.coeffs.A1);
  } catch (const Error& e) {
    res.fit_status = e.what();
    res.fit_failed = true;
  }
  return res;
}

std::vector<double> spectrum_at(const Experiment& ex, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::kInvalidArgument, "r must be positive");
  return eigenvalues(build_operator(*ex.domain, ex.weight, ex.symbol, r, BuildOptions::from(ex.config)).matrix);
}

}  // namespace szl
