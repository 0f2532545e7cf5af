#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace longmem::detail {

/// Real-to-halfcomplex forward DFT of fixed length (FFTW behind the scenes;
/// plan creation is serialized, execution is reentrant on own buffers).
class RealForwardFft {
 public:
  explicit RealForwardFft(std::size_t n);
  ~RealForwardFft();
  RealForwardFft(const RealForwardFft&) = delete;
  RealForwardFft& operator=(const RealForwardFft&) = delete;

  std::size_t size() const { return n_; }
  /// out must hold n/2+1 bins; unnormalized sum convention.
  void transform(const double* in, std::complex<double>* out);

 private:
  std::size_t n_;
  void* plan_;
  double* in_buf_;
  void* out_buf_;
};

/// Halfcomplex-to-real inverse DFT of fixed length (unnormalized).
class RealInverseFft {
 public:
  explicit RealInverseFft(std::size_t n);
  ~RealInverseFft();
  RealInverseFft(const RealInverseFft&) = delete;
  RealInverseFft& operator=(const RealInverseFft&) = delete;

  std::size_t size() const { return n_; }
  /// in holds n/2+1 bins and is clobbered; out holds n reals.
  void transform(std::complex<double>* in, double* out);

 private:
  std::size_t n_;
  void* plan_;
  void* in_buf_;
  double* out_buf_;
};

/// |DFT(x)|^2 at bins 0..n/2, one-shot convenience for periodograms.
std::vector<double> power_spectrum(const std::vector<double>& x);

}  // namespace longmem::detail
