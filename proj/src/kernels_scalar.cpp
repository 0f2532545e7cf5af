#include "longmem/kernels.hpp"

namespace longmem::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void hermite_apply(int order, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i];
    double hm1 = 1.0;  // h_0
    double h = v;      // h_1
    for (int k = 1; k < order; ++k) {
      const double next = v * h - static_cast<double>(k) * hm1;
      hm1 = h;
      h = next;
    }
    out[i] = h;
  }
}

}  // namespace longmem::kernels::scalar
