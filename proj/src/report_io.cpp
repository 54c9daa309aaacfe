#include "szegolab/report_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace szl {

namespace {

using ojson = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ojson coeffs_json(const TwoTerm& t) {
  return ojson{{"A0", t.A0}, {"A1", t.A1}, {"A1_route", t.route}, {"A1_tail_bound", t.tail_bound}};
}

}  // namespace

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_predict_csv(const PredictResult& p, std::ostream& os) {
  os << kPredictCsvHeader << '\n';
  for (std::size_t i = 0; i < p.r_values.size(); ++i) {
    const double r = p.r_values[i];
    os << format_double(r) << ',' << format_double(p.coeffs.A0 * r * r) << ',' << format_double(p.coeffs.A1 * r) << ','
       << format_double(p.predicted[i]) << ',' << format_double(p.coeffs.tail_bound * r) << '\n';
  }
}

void write_sweep_csv(const SweepResult& s, std::ostream& os) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& row : s.rows) {
    os << format_double(row.r) << ',' << row.basis_size << ',';
    if (row.ok) {
      os << format_double(row.measured) << ',' << format_double(row.predicted) << ',' << format_double(row.residual)
         << ',' << format_double(row.residual / row.r);
    } else {
      os << ",," << format_double(row.predicted) << ",,";
    }
    os << ',' << format_double(row.identity_defect) << ',' << format_double(row.tail_level) << ','
       << format_double(row.symbol_border) << ',' << format_double(row.hermitian_defect) << ','
       << (row.near_threshold ? 1 : 0) << ',' << csv_field(row.ok ? "ok" : row.error) << '\n';
  }
}

void write_verify_csv(const std::vector<Check>& checks, std::ostream& os) {
  os << kVerifyCsvHeader << '\n';
  for (const Check& c : checks) {
    os << c.suite << ',' << csv_field(c.name) << ',' << (c.pass ? 1 : 0) << ',' << format_double(c.measured) << ','
       << format_double(c.tolerance) << ',' << csv_field(c.detail) << '\n';
  }
}

std::string predict_json(const PredictResult& p) {
  ojson j;
  j["name"] = p.name;
  j["description"] = p.description;
  j["coefficients"] = coeffs_json(p.coeffs);
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < p.r_values.size(); ++i) rows.push_back({{"r", p.r_values[i]}, {"predicted", p.predicted[i]}});
  j["predictions"] = rows;
  return j.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& s) {
  ojson j;
  j["name"] = s.prediction.name;
  j["description"] = s.prediction.description;
  j["coefficients"] = coeffs_json(s.prediction.coeffs);
  ojson rows = ojson::array();
  for (const SweepRow& row : s.rows) {
    ojson o{{"r", row.r}, {"ok", row.ok}, {"basis_size", row.basis_size}, {"predicted", row.predicted}};
    if (row.ok) {
      o["measured"] = row.measured;
      o["residual"] = row.residual;
      o["residual_over_r"] = row.residual / row.r;
    } else {
      o["error"] = row.error;
    }
    o["identity_defect"] = row.identity_defect;
    o["tail_level"] = row.tail_level;
    o["symbol_border"] = row.symbol_border;
    o["hermitian_defect"] = row.hermitian_defect;
    o["near_threshold"] = row.near_threshold;
    rows.push_back(o);
  }
  j["rows"] = rows;
  if (s.fit) {
    const AsymptoticsReport& f = *s.fit;
    j["fit"] = ojson{{"r_values", f.r_values},        {"measured", f.measured},        {"predicted", f.predicted},
                     {"residuals", f.residuals},      {"predicted_A0", f.predicted_A0}, {"predicted_A1", f.predicted_A1},
                     {"fitted_c2", f.fitted_c2},      {"fitted_c1", f.fitted_c1},       {"fitted_c0", f.fitted_c0},
                     {"rel_err_c2", f.rel_err_c2},    {"rel_err_c1", f.rel_err_c1}};
  } else {
    j["fit"] = nullptr;
    j["fit_status"] = s.fit_status;
  }
  return j.dump(2) + "\n";
}

std::string verify_json(const std::string& suite, const std::vector<Check>& checks) {
  ojson j;
  j["suite"] = suite;
  int passed = 0;
  ojson arr = ojson::array();
  for (const Check& c : checks) {
    passed += c.pass ? 1 : 0;
    arr.push_back({{"suite", c.suite},
                   {"name", c.name},
                   {"pass", c.pass},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  j["passed"] = passed;
  j["total"] = checks.size();
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

std::string write_file(const std::string& dir, const std::string& file, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kInvalidArgument, "cannot create output directory '" + dir + "': " + ec.message());
  const std::string path = (std::filesystem::path(dir) / file).string();
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  return path;
}

}  // namespace szl
