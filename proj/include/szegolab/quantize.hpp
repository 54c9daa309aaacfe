#pragma once

// Finite Weyl quantisation: op[q] in the Hermite basis and as a sampled
// position kernel, plus traces, norms and spectral calculus.

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "szegolab/geometry.hpp"
#include "szegolab/symbolics.hpp"

namespace szl {

enum class BasisKind { kHermite, kPositionGrid };

/// A K x K matrix of op[q] with the discretisation it came from.
struct OperatorMatrix {
  Eigen::MatrixXcd data;
  BasisKind basis = BasisKind::kHermite;
  /// Position grid of a kernel matrix: x_i = x0 + i * spacing.
  double x0 = 0.0;
  double spacing = 0.0;
  std::string provenance;
  /// Error of the same construction applied to q = 1: max |M - I| for the
  /// Hermite route, max |A h_k - h_k| over sampled h_0..h_19 for the kernel.
  double identity_defect = 0.0;
  /// Largest |M_kk| over the last four basis functions (Hermite route).
  double tail_level = 0.0;

  int size() const { return static_cast<int>(data.rows()); }
};

/// M_kj = int q W_{h_j, h_k} for k, j < K, from the angular Fourier modes of
/// q on rings and closed-form Laguerre matrix elements. q = 1 gives I. Throws
/// BasisOverflow when the basis reaches past the grid while q is not
/// negligible on its border.
OperatorMatrix op_hermite(const SymbolGrid& q, int K);

/// Weyl kernel K(x, y) = (2 pi)^{-1} int exp(i (x - y) xi) q((x + y)/2, xi) dxi
/// on every second x node of the symbol grid, entries K(x_i, x_j) * dx.
/// Throws AliasedKernel if more than 1e-8 of the kernel mass sits near the
/// grid edge.
OperatorMatrix op_kernel(const SymbolGrid& q);

/// ceil(ceil((r R + 6)^2 / 2) * 1.2) with R the bounding radius.
int default_basis_size(const Domain& dom, double r);

double hermitian_defect(const OperatorMatrix& M);

cplx trace(const OperatorMatrix& M);
double trace_norm(const OperatorMatrix& M);
double op_norm(const OperatorMatrix& M);

/// Eigenvalues in decreasing order. Throws NonHermitian.
std::vector<double> eigenvalues(const OperatorMatrix& M);

/// f with f(0) = 0: a polynomial sum_{i >= 1} c_i t^i, or any callable.
class SpectralFunction {
 public:
  enum class Kind { kPolynomial, kCallable };

  /// coeffs[i] multiplies t^i; coeffs[0] must be zero.
  static SpectralFunction polynomial(std::vector<double> coeffs);
  /// The caller asserts f(0) = 0; checked at 0.
  static SpectralFunction callable(std::function<double(double)> f, std::string name,
                                   double support_radius = 0.0);
  /// Indicator of [delta, inf), delta > 0.
  static SpectralFunction threshold(double delta);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::string& name() const { return name_; }
  double support_radius() const { return support_radius_; }
  bool is_threshold() const { return threshold_ > 0.0; }
  double threshold_value() const { return threshold_; }

 private:
  Kind kind_ = Kind::kPolynomial;
  std::vector<double> coeffs_;
  std::function<double(double)> fn_;
  std::string name_;
  double support_radius_ = 0.0;
  double threshold_ = 0.0;
};

enum class SpectralRoute { kAuto, kEigen, kHorner };

/// f(M). kAuto uses the eigendecomposition for Hermitian M and Horner's rule
/// otherwise. Throws NonHermitian for a callable f on non-Hermitian input.
OperatorMatrix spectral_apply(const OperatorMatrix& M, const SpectralFunction& f,
                              SpectralRoute route = SpectralRoute::kAuto);

/// sum_i f(lambda_i) over the eigenvalues of Hermitian M.
double spectral_trace(const OperatorMatrix& M, const SpectralFunction& f);

struct CountResult {
  int count = 0;
  /// Some eigenvalue lies within 1e-9 of the threshold.
  bool near_threshold = false;
  double closest_gap = 0.0;
};

/// #{eigenvalues >= delta}.
CountResult counting(const OperatorMatrix& M, double delta);
CountResult counting(const std::vector<double>& eigenvalues_desc, double delta);

/// ||op[q]^2 - op[q^2]||_1 in the Hermite basis of size K. n selects the
/// Moyal order of the comparison symbol; for p = q both orders give q^2.
double composition_remainder(const SymbolGrid& q, int n, int K);

/// Index,eigenvalue CSV at 17 significant digits.
void write_spectrum_csv(const std::vector<double>& eigs, std::ostream& os);

/// Flat binary dump: "SZLM", int32 K, int32 basis kind, then K*K complex
/// doubles in column-major order.
void write_matrix_binary(const OperatorMatrix& M, std::ostream& os);

}  // namespace szl
