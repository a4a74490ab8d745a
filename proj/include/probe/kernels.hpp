#pragma once
// Vector kernels used by the policy inner loops. Scalar reference
// implementations are always available; on x86-64 an AVX2 variant is
// selected at runtime when the CPU supports it, on ARM64 a NEON variant.
// The dispatched and scalar paths are equivalence-tested against each
// other (bit-exact for elementwise ops, 1e-12 relative for reductions,
// whose summation order differs).

#include <cstddef>
#include <string_view>

namespace probe::kern {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void add(double* y, const double* x, std::size_t n);                  // y += x
void axpy(double* y, double alpha, const double* x, std::size_t n);   // y += alpha*x
double sum(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace scalar

// Runtime-dispatched entry points.
double dot(const double* a, const double* b, std::size_t n);
void add(double* y, const double* x, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

// Name of the backend the dispatcher picked: "avx2", "neon" or "scalar".
std::string_view active_backend();

}  // namespace probe::kern
