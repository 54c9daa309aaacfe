#include <gtest/gtest.h>

#include <sstream>

#include "szegolab/config.hpp"
#include "szegolab/error.hpp"
#include "szegolab/experiment.hpp"
#include "szegolab/report_io.hpp"
#include "szegolab/verify.hpp"

using namespace szl;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no szl::Error thrown";
  return ErrorKind::kInvalidArgument;
}

std::string message_of(const std::string& json) {
  try {
    parse_config(json);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig smoke(const std::string& mode) {
  return parse_config(R"({"name": "smoke", "mode": {"kind": ")" + mode +
                      R"(", "delta": 0.5, "coeffs": [0, 0, 1]}, "r_list": [4, 6, 8], "grid_n": 512})");
}

}  // namespace

TEST(Config, DefaultsAndFullDocument) {
  const ExperimentConfig c = parse_config(R"({
    "name": "full",
    "domain": {"kind": "star", "radius": 1.5, "eps": 0.2, "k": 5},
    "window": {"kind": "hermite_pair", "k": 1, "k2": 0},
    "symbol": {"kind": "expression", "terms": [{"primitive": "one", "coeff": 2}, {"primitive": "x", "coeff": -1}]},
    "mode": {"kind": "trace", "coeffs": [0, 1, 1]},
    "r_list": [2, 4],
    "grid_n": 256, "grid_margin": 8, "basis_size": 40, "sampling": "pointwise", "out_dir": "res", "seed": 3
  })");
  EXPECT_EQ(c.domain.kind, "star");
  EXPECT_EQ(c.domain.k, 5);
  EXPECT_EQ(c.window.describe(), "hermite_pair(0,1)");
  EXPECT_DOUBLE_EQ(c.symbol.build()({0.5, 7.0}), 1.5);
  EXPECT_FALSE(c.symbol.is_unit());
  EXPECT_EQ(c.mode.function().coeffs().size(), 3u);
  EXPECT_EQ(c.sampling, SymbolSampling::kPointwise);
  EXPECT_EQ(c.seed, 3u);

  const ExperimentConfig d = parse_config(R"({"r_list": [1]})");
  EXPECT_EQ(d.domain.kind, "disc");
  EXPECT_TRUE(d.symbol.is_unit());
  EXPECT_TRUE(d.mode.function().is_threshold());
  EXPECT_EQ(d.grid_n, 1024);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(message_of(R"({"r_list": []})").find("r_list"), std::string::npos);
  EXPECT_NE(message_of(R"({"r_list": [4, 4]})").find("strictly increasing"), std::string::npos);
  const std::string f0 = message_of(R"({"mode": {"kind": "trace", "coeffs": [0.5, 1]}, "r_list": [1]})");
  EXPECT_NE(f0.find("mode.coeffs"), std::string::npos);
  EXPECT_NE(f0.find("f(0) = 0"), std::string::npos);
  EXPECT_NE(message_of(R"({"domain": {"kind": "square"}, "r_list": [1]})").find("domain.kind"), std::string::npos);
  EXPECT_NE(message_of(R"({"domain": {"radius": "big"}, "r_list": [1]})").find("domain.radius"), std::string::npos);
  EXPECT_NE(message_of(R"({"colour": 1, "r_list": [1]})").find("colour"), std::string::npos);
  EXPECT_NE(message_of(R"({"grid_n": 1000, "r_list": [1]})").find("grid_n"), std::string::npos);
  EXPECT_NE(message_of(R"({"symbol": {"kind": "expression", "terms": [{"primitive": "y"}]}, "r_list": [1]})")
                .find("symbol.terms[0].primitive"),
            std::string::npos);
  EXPECT_NE(message_of("{\"r_list\": [1,").find("malformed JSON"), std::string::npos);
  EXPECT_EQ(kind_of([] { parse_config(R"({"mode": {"delta": 0}, "r_list": [1]})"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { load_config("/nonexistent/config.json"); }), ErrorKind::kConfig);
}

TEST(Config, SqueezedWeightMoments) {
  // second moment (s^2 + 1/s^2)/2, first moment below its square root
  const ExperimentConfig c = parse_config(R"({"window": {"kind": "squeezed", "width": 1.3}, "r_list": [1]})");
  const PhaseWeight W = c.window.weight();
  EXPECT_NEAR(W.moments[2], 0.5 * (1.69 + 1.0 / 1.69), 1e-15);
  EXPECT_LT(W.moments[1], std::sqrt(W.moments[2]));
  EXPECT_NEAR(W.moments[1], std::sqrt(std::numbers::pi) / 2.0, 0.05);  // s = 1 value
  EXPECT_NEAR(W(0.0, 0.0).real(), 1.0 / std::numbers::pi, 1e-15);
}

TEST(Pipeline, PredictDiscHalf) {
  const PredictResult p = run_predict(Experiment(parse_config(R"({"r_list": [10]})")));
  EXPECT_NEAR(p.coeffs.A0, 0.5, 1e-13);
  EXPECT_NEAR(p.coeffs.A1, 0.0, 1e-12);
  EXPECT_NEAR(p.predicted[0], 50.0, 1e-10);
  const PredictResult lin = run_predict(Experiment(parse_config(R"({"mode": {"kind": "trace", "coeffs": [0, 2]}, "r_list": [1]})")));
  EXPECT_LT(std::abs(lin.coeffs.A1), 1e-12);
}

TEST(Pipeline, SmokeCountingSweep) {
  const SweepResult s = run_sweep(Experiment(smoke("counting")));
  ASSERT_EQ(s.successes(), 3);
  EXPECT_FALSE(s.fit);
  EXPECT_FALSE(s.fit_failed);
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    EXPECT_LE(std::abs(s.rows[i].residual) / s.rows[i].r, std::abs(s.rows[i - 1].residual) / s.rows[i - 1].r);
  }
  for (const auto& row : s.rows) {
    EXPECT_LT(row.identity_defect, 1e-10);
    EXPECT_LT(row.tail_level, 1e-8);
    EXPECT_FALSE(row.near_threshold);
  }
}

TEST(Pipeline, SmokeTraceSweepIsBoundedAndFits) {
  ExperimentConfig c = smoke("trace");
  c.r_list = {4, 6, 8, 10};
  const SweepResult s = run_sweep(Experiment(c));
  ASSERT_EQ(s.successes(), 4);
  for (const auto& row : s.rows) EXPECT_LT(std::abs(row.residual), 0.05) << row.r;
  ASSERT_TRUE(s.fit.has_value());
  EXPECT_NEAR(s.fit->fitted_c2, 0.5, 1e-2);
}

TEST(Pipeline, PerRFailuresAreRecorded) {
  // a tiny grid cannot hold the r = 8 symbol
  ExperimentConfig c = smoke("counting");
  c.grid_margin = 0.5;
  c.grid_n = 128;
  const SweepResult s = run_sweep(Experiment(c));
  EXPECT_LT(s.successes(), 3);
  bool saw = false;
  for (const auto& row : s.rows) saw = saw || (!row.ok && row.error.find("GridTooSmall") != std::string::npos);
  EXPECT_TRUE(saw);
}

TEST(Pipeline, SpectrumRejectsBadR) {
  EXPECT_EQ(kind_of([] { spectrum_at(Experiment(smoke("counting")), -1.0); }), ErrorKind::kInvalidArgument);
  const auto ev = spectrum_at(Experiment(smoke("counting")), 4.0);
  EXPECT_EQ(ev.size(), 60u);
  EXPECT_TRUE(std::is_sorted(ev.rbegin(), ev.rend()));
}

TEST(Reports, CsvHeadersPrecisionAndDeterminism) {
  const Experiment ex(smoke("counting"));
  const SweepResult a = run_sweep(ex), b = run_sweep(ex);
  std::ostringstream ca, cb;
  write_sweep_csv(a, ca);
  write_sweep_csv(b, cb);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(sweep_json(a), sweep_json(b));
  EXPECT_EQ(ca.str().substr(0, ca.str().find('\n')), kSweepCsvHeader);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_NE(sweep_json(a).find("\"fit\": null"), std::string::npos);

  std::ostringstream pc;
  write_predict_csv(run_predict(ex), pc);
  EXPECT_EQ(pc.str().substr(0, pc.str().find('\n')), kPredictCsvHeader);
}

TEST(Verify, SuitesPassAndUnknownIsRejected) {
  for (const std::string suite : {"geometry", "szego"}) {
    const auto checks = run_verify(suite, 11);
    EXPECT_FALSE(checks.empty());
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << " " << c.measured << " " << c.detail;
  }
  EXPECT_EQ(kind_of([] { run_verify("optics"); }), ErrorKind::kInvalidArgument);
  const std::string json = verify_json("szego", run_verify("szego"));
  EXPECT_NE(json.find("\"tolerance\""), std::string::npos);
}
