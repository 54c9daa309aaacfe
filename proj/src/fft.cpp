#include "szegolab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "szegolab/error.hpp"

namespace szl {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FftPlan::Impl {
  fftw_plan plan = nullptr;
};

FftPlan::FftPlan(int n, FftDirection dir) : impl_(std::make_unique<Impl>()), size_(n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "FFT length must be positive");
  std::vector<cplx> scratch(static_cast<std::size_t>(n));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  impl_->plan = fftw_plan_dft_1d(n, buf, buf, dir == FftDirection::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan::FftPlan(int rows, int cols, FftDirection dir)
    : impl_(std::make_unique<Impl>()), size_(static_cast<std::size_t>(rows) * cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorKind::kInvalidArgument, "FFT extents must be positive");
  std::vector<cplx> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  impl_->plan = fftw_plan_dft_2d(rows, cols, buf, buf,
                                 dir == FftDirection::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan::~FftPlan() {
  if (impl_ && impl_->plan) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(impl_->plan);
  }
}

FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::execute(const cplx* in, cplx* out) const {
  // fftw_execute_dft takes a non-const input pointer but does not write to it
  // for out-of-place complex transforms.
  fftw_execute_dft(impl_->plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

ChirpZ::ChirpZ(int n_in, int n_out, double alpha)
    : n_in_(n_in),
      n_out_(n_out),
      len_(next_pow2(n_in + n_out - 1)),
      fwd_(len_, FftDirection::kForward),
      bwd_(len_, FftDirection::kBackward) {
  auto chirp = [alpha](long m) {
    // reduce m^2 modulo the period of the chirp to keep the phase small
    const double phase = 0.5 * alpha * static_cast<double>(m) * static_cast<double>(m);
    return std::polar(1.0, std::remainder(phase, 2.0 * M_PI));
  };
  pre_.resize(n_in);
  for (int j = 0; j < n_in; ++j) pre_[j] = chirp(j);
  post_.resize(n_out);
  for (int b = 0; b < n_out; ++b) post_[b] = chirp(b);
  kernel_hat_.assign(len_, cplx(0.0));
  for (int m = 0; m < n_out; ++m) kernel_hat_[m] = std::conj(chirp(m));
  for (int m = 1; m < n_in; ++m) kernel_hat_[len_ - m] = std::conj(chirp(m));
  fwd_.execute(kernel_hat_.data());
  const double scale = 1.0 / len_;
  for (auto& v : kernel_hat_) v *= scale;
}

void ChirpZ::apply(const cplx* x, cplx* y) const {
  std::vector<cplx> buf(len_, cplx(0.0));
  for (int j = 0; j < n_in_; ++j) buf[j] = x[j] * pre_[j];
  fwd_.execute(buf.data());
  for (int i = 0; i < len_; ++i) buf[i] *= kernel_hat_[i];
  bwd_.execute(buf.data());
  for (int b = 0; b < n_out_; ++b) y[b] = buf[b] * post_[b];
}

}  // namespace szl
