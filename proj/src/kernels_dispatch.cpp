#include <cstdlib>
#include <cstring>

#include "longmem/kernels.hpp"

namespace longmem::kernels {

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
double sum(const double*, std::size_t);
double sum_sq(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void hermite_apply(int, const double*, double*, std::size_t);
}  // namespace avx2
#endif
#if defined(__aarch64__)
namespace neon {
double dot(const double*, const double*, std::size_t);
double sum(const double*, std::size_t);
double sum_sq(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void hermite_apply(int, const double*, double*, std::size_t);
}  // namespace neon
#endif

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*hermite_apply)(int, const double*, double*, std::size_t);
};

constexpr Table kScalarTable{Isa::scalar,     scalar::dot,  scalar::sum,
                             scalar::sum_sq,  scalar::axpy, scalar::hermite_apply};

Table detect() {
  const char* forced = std::getenv("LONGMEM_SIMD");
  const bool want_scalar = forced && std::strcmp(forced, "scalar") == 0;
  if (want_scalar) return kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return {Isa::avx2,     avx2::dot,  avx2::sum,
            avx2::sum_sq,  avx2::axpy, avx2::hermite_apply};
#endif
#if defined(__aarch64__)
  return {Isa::neon,     neon::dot,  neon::sum,
          neon::sum_sq,  neon::axpy, neon::hermite_apply};
#endif
  return kScalarTable;
}

const Table& table() {
  static const Table t = detect();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    default: return "scalar";
  }
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double sum(const double* x, std::size_t n) { return table().sum(x, n); }
double sum_sq(const double* x, std::size_t n) { return table().sum_sq(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { table().axpy(a, x, y, n); }
void hermite_apply(int order, const double* x, double* out, std::size_t n) {
  table().hermite_apply(order, x, out, n);
}

}  // namespace longmem::kernels
