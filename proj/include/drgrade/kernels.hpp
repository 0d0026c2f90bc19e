#pragma once

#include <cstddef>
#include <string>

// Low-level arithmetic kernels behind the tensor ops. Every kernel has a
// scalar reference implementation; on x86-64 with AVX2+FMA a vectorized
// variant is selected once at startup. The two variants are equivalence
// tested in tests/test_kernels.cpp.
namespace drg::kernels {

// y[i] += a * x[i]
using AxpyFn = void (*)(double a, const double* x, double* y, std::size_t n);
// out[i] = a[i] * b[i]
using MulFn = void (*)(const double* a, const double* b, double* out, std::size_t n);
// out[i] = s * x[i]
using ScaleFn = void (*)(const double* x, double s, double* out, std::size_t n);
// sum of x
using SumFn = double (*)(const double* x, std::size_t n);
// dot product
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// max of x (n >= 1)
using MaxFn = double (*)(const double* x, std::size_t n);
// out[i] = max(0, x[i])
using ReluFn = void (*)(const double* x, double* out, std::size_t n);

extern AxpyFn axpy;
extern MulFn mul;
extern ScaleFn scale;
extern SumFn sum;
extern DotFn dot;
extern MaxFn max;
extern ReluFn relu;

// "scalar" or "avx2"
const std::string& active_backend();

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
void mul(const double* a, const double* b, double* out, std::size_t n);
void scale(const double* x, double s, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double max(const double* x, std::size_t n);
void relu(const double* x, double* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void mul(const double* a, const double* b, double* out, std::size_t n);
void scale(const double* x, double s, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double max(const double* x, std::size_t n);
void relu(const double* x, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace drg::kernels
