// Command-line runner: predict, sweep, verify and spectrum subcommands.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "szegolab/config.hpp"
#include "szegolab/error.hpp"
#include "szegolab/experiment.hpp"
#include "szegolab/quantize.hpp"
#include "szegolab/report_io.hpp"
#include "szegolab/verify.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

bool is_validation(szl::ErrorKind k) {
  return k == szl::ErrorKind::kConfig || k == szl::ErrorKind::kInvalidArgument;
}

// --out wins over SZEGOLAB_OUT, which wins over the config file.
std::string output_dir(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SZEGOLAB_OUT"); env && *env) return env;
  return from_config;
}

std::string r_tag(double r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

int cmd_predict(const std::string& config_path, const std::string& out_flag) {
  const szl::Experiment ex(szl::load_config(config_path));
  const szl::PredictResult p = szl::run_predict(ex);
  const std::string dir = output_dir(out_flag, ex.config.out_dir);
  std::ostringstream csv;
  szl::write_predict_csv(p, csv);
  szl::write_file(dir, p.name + "_predict.csv", csv.str());
  const std::string json = szl::write_file(dir, p.name + "_predict.json", szl::predict_json(p));
  std::cout << p.description << "\nA0 = " << szl::format_double(p.coeffs.A0)
            << "\nA1 = " << szl::format_double(p.coeffs.A1) << " (" << p.coeffs.route << ")\nwrote " << json << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_flag) {
  const szl::Experiment ex(szl::load_config(config_path));
  const szl::SweepResult s = szl::run_sweep(ex);
  const std::string dir = output_dir(out_flag, ex.config.out_dir);
  std::ostringstream csv;
  szl::write_sweep_csv(s, csv);
  szl::write_file(dir, s.prediction.name + "_sweep.csv", csv.str());
  const std::string json = szl::write_file(dir, s.prediction.name + "_sweep.json", szl::sweep_json(s));

  std::cout << s.prediction.description << "\n";
  for (const auto& row : s.rows) {
    std::cout << "r=" << row.r << "  ";
    if (row.ok) {
      std::cout << "measured=" << szl::format_double(row.measured) << "  predicted=" << szl::format_double(row.predicted)
                << "  residual/r=" << szl::format_double(row.residual / row.r) << "\n";
    } else {
      std::cout << "failed: " << row.error << "\n";
    }
  }
  if (s.fit) {
    std::cout << "fit c2=" << szl::format_double(s.fit->fitted_c2) << " c1=" << szl::format_double(s.fit->fitted_c1)
              << " c0=" << szl::format_double(s.fit->fitted_c0) << "\n";
  } else {
    std::cout << "fit " << s.fit_status << "\n";
  }
  std::cout << "wrote " << json << "\n";
  return (s.successes() == 0 || s.fit_failed) ? kExitNumerical : 0;
}

int cmd_verify(const std::string& suite, const std::string& out_flag, unsigned seed) {
  const std::vector<szl::Check> checks = szl::run_verify(suite, seed);
  int failed = 0;
  for (const auto& c : checks) {
    failed += c.pass ? 0 : 1;
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name << "  measured=" << c.measured
              << " tol=" << c.tolerance << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  }
  const std::string dir = output_dir(out_flag, "out");
  std::ostringstream csv;
  szl::write_verify_csv(checks, csv);
  szl::write_file(dir, "verify_" + suite + ".csv", csv.str());
  const std::string json = szl::write_file(dir, "verify_" + suite + ".json", szl::verify_json(suite, checks));
  std::cout << (checks.size() - failed) << "/" << checks.size() << " passed; wrote " << json << "\n";
  return failed == 0 ? 0 : kExitNumerical;
}

int cmd_spectrum(const std::string& config_path, const std::string& out_flag, double r) {
  const szl::Experiment ex(szl::load_config(config_path));
  if (r <= 0.0) r = ex.config.r_list.front();
  const std::vector<double> eigs = szl::spectrum_at(ex, r);
  std::ostringstream csv;
  szl::write_spectrum_csv(eigs, csv);
  const std::string path =
      szl::write_file(output_dir(out_flag, ex.config.out_dir), ex.config.name + "_spectrum_r" + r_tag(r) + ".csv", csv.str());
  std::cout << eigs.size() << " eigenvalues at r=" << r << "; wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-term Szego asymptotics for time-frequency localisation operators"};
  app.require_subcommand(1);
  std::string config_path, out_dir, suite = "all";
  int threads = 0;
  double r = 0.0;
  unsigned seed = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) sub->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
  };
  CLI::App* predict = app.add_subcommand("predict", "A0, A1 and the two-term prediction per r");
  add_common(predict, true);
  CLI::App* sweep = app.add_subcommand("sweep", "measure traces or counts over r_list and fit");
  add_common(sweep, true);
  CLI::App* verify = app.add_subcommand("verify", "run invariant checks");
  add_common(verify, false);
  verify->add_option("--suite", suite, "geometry|timefreq|symbolics|quantize|szego|all")
      ->check(CLI::IsMember(szl::verify_suites()));
  verify->add_option("--seed", seed, "seed for randomised checks");
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of T_r for one r");
  add_common(spectrum, true);
  spectrum->add_option("--r", r, "dilation (default: first entry of r_list)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (*predict) return cmd_predict(config_path, out_dir);
    if (*sweep) return cmd_sweep(config_path, out_dir);
    if (*verify) return cmd_verify(suite, out_dir, seed);
    if (*spectrum) return cmd_spectrum(config_path, out_dir, r);
  } catch (const szl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation(e.kind()) ? kExitValidation : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}
