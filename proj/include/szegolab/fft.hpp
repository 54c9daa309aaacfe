#pragma once

// Thin RAII layer over FFTW plus a Bluestein chirp-z transform.

#include <complex>
#include <memory>
#include <vector>

namespace szl {

using cplx = std::complex<double>;

enum class FftDirection { kForward, kBackward };

/// Unnormalised DFT of a fixed shape. execute() may be called concurrently on
/// distinct buffers; plan creation is serialised internally.
class FftPlan {
 public:
  /// 1D transform of length n.
  FftPlan(int n, FftDirection dir);
  /// Row-major 2D transform with the given extents.
  FftPlan(int rows, int cols, FftDirection dir);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(const cplx* in, cplx* out) const;
  void execute(cplx* inout) const { execute(inout, inout); }

  std::size_t size() const { return size_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t size_ = 0;
};

/// y_b = sum_{j < n_in} x_j exp(i * alpha * j * b) for b < n_out, for any real
/// alpha, via Bluestein's chirp-z algorithm.
class ChirpZ {
 public:
  ChirpZ(int n_in, int n_out, double alpha);

  void apply(const cplx* x, cplx* y) const;

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }

 private:
  int n_in_;
  int n_out_;
  int len_;
  std::vector<cplx> pre_;        // exp(i alpha j^2 / 2)
  std::vector<cplx> post_;       // exp(i alpha b^2 / 2)
  std::vector<cplx> kernel_hat_; // DFT of exp(-i alpha m^2 / 2), wrapped
  FftPlan fwd_;
  FftPlan bwd_;
};

int next_pow2(int n);

}  // namespace szl
