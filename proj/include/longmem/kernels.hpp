#pragma once

#include <cstddef>

namespace longmem::kernels {

enum class Isa { scalar, avx2, neon };

/// Instruction set the dispatch table currently points at. Detected once at
/// startup from the CPU; the environment variable LONGMEM_SIMD=scalar|avx2|neon
/// overrides (falling back to scalar when the request is unavailable).
Isa active_isa();
const char* isa_name(Isa isa);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
/// Elementwise probabilists' Hermite polynomial h_k, k >= 1.
void hermite_apply(int order, const double* x, double* out, std::size_t n);

/// Reference implementations. The dispatched variants above must agree with
/// these up to summation-order rounding; the equivalence suite enforces it.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void hermite_apply(int order, const double* x, double* out, std::size_t n);
}  // namespace scalar

}  // namespace longmem::kernels
