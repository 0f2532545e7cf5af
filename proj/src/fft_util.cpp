#include "fft_util.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace longmem::detail {

namespace {
// The FFTW planner mutates global state; executions are thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealForwardFft::RealForwardFft(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  in_buf_ = fftw_alloc_real(n);
  out_buf_ = fftw_alloc_complex(n / 2 + 1);
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_buf_,
                               static_cast<fftw_complex*>(out_buf_), FFTW_ESTIMATE);
}

RealForwardFft::~RealForwardFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_buf_);
  fftw_free(out_buf_);
}

void RealForwardFft::transform(const double* in, std::complex<double>* out) {
  std::memcpy(in_buf_, in, n_ * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::memcpy(out, out_buf_, (n_ / 2 + 1) * sizeof(std::complex<double>));
}

RealInverseFft::RealInverseFft(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  in_buf_ = fftw_alloc_complex(n / 2 + 1);
  out_buf_ = fftw_alloc_real(n);
  plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), static_cast<fftw_complex*>(in_buf_),
                               out_buf_, FFTW_ESTIMATE);
}

RealInverseFft::~RealInverseFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_buf_);
  fftw_free(out_buf_);
}

void RealInverseFft::transform(std::complex<double>* in, double* out) {
  std::memcpy(in_buf_, in, (n_ / 2 + 1) * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::memcpy(out, out_buf_, n_ * sizeof(double));
}

std::vector<double> power_spectrum(const std::vector<double>& x) {
  RealForwardFft fft(x.size());
  std::vector<std::complex<double>> bins(x.size() / 2 + 1);
  fft.transform(x.data(), bins.data());
  std::vector<double> power(bins.size());
  for (std::size_t j = 0; j < bins.size(); ++j) power[j] = std::norm(bins[j]);
  return power;
}

}  // namespace longmem::detail
