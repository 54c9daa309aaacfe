#pragma once

// CSV and JSON writers for predictions, sweeps, spectra and verify reports.
// Floats are printed with 17 significant digits; every CSV has a header.

#include <iosfwd>
#include <string>
#include <vector>

#include "szegolab/experiment.hpp"
#include "szegolab/verify.hpp"

namespace szl {

std::string format_double(double v);

inline constexpr const char* kPredictCsvHeader = "r,A0_term,A1_term,predicted,tail_bound";
inline constexpr const char* kSweepCsvHeader =
    "r,basis_size,measured,predicted,residual,residual_over_r,identity_defect,tail_level,symbol_border,"
    "hermitian_defect,near_threshold,status";
inline constexpr const char* kVerifyCsvHeader = "suite,name,pass,measured,tolerance,detail";

void write_predict_csv(const PredictResult& p, std::ostream& os);
void write_sweep_csv(const SweepResult& s, std::ostream& os);
void write_verify_csv(const std::vector<Check>& checks, std::ostream& os);

std::string predict_json(const PredictResult& p);
std::string sweep_json(const SweepResult& s);
std::string verify_json(const std::string& suite, const std::vector<Check>& checks);

/// Writes text to dir/file, creating dir. Throws InvalidArgument on I/O errors.
std::string write_file(const std::string& dir, const std::string& file, const std::string& text);

}  // namespace szl
