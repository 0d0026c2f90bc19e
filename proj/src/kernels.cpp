#include "drgrade/kernels.hpp"

#include <algorithm>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace drg::kernels {

namespace scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* x, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = s * x[i];
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double max(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void relu(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {

#define DRG_AVX2 __attribute__((target("avx2,fma")))

// avx2-only target: with fma enabled the compiler would contract the scalar
// tail into fused ops and break bit-parity with the scalar kernel
__attribute__((target("avx2"))) void axpy(double a, const double* x, double* y,
                                          std::size_t n) {
    std::size_t i = 0;
    __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        // mul+add (not fma) keeps results bit-identical to the scalar kernel
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

DRG_AVX2 void mul(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

DRG_AVX2 void scale(const double* x, double s, double* out, std::size_t n) {
    std::size_t i = 0;
    __m256d vs = _mm256_set1_pd(s);
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = s * x[i];
}

DRG_AVX2 static double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

DRG_AVX2 double sum(const double* x, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

DRG_AVX2 double dot(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

DRG_AVX2 double max(const double* x, std::size_t n) {
    std::size_t i = 0;
    double m = x[0];
    if (n >= 4) {
        __m256d vm = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
        __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(vm), _mm256_extractf128_pd(vm, 1));
        m = std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
    } else {
        i = 1;
    }
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

DRG_AVX2 void relu(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    __m256d zero = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

#undef DRG_AVX2

}  // namespace avx2
#endif  // __x86_64__

namespace {

struct Dispatch {
    AxpyFn axpy = scalar::axpy;
    MulFn mul = scalar::mul;
    ScaleFn scale = scalar::scale;
    SumFn sum = scalar::sum;
    DotFn dot = scalar::dot;
    MaxFn max = scalar::max;
    ReluFn relu = scalar::relu;
    std::string backend = "scalar";

    Dispatch() {
#if defined(__x86_64__)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            axpy = avx2::axpy;
            mul = avx2::mul;
            scale = avx2::scale;
            sum = avx2::sum;
            dot = avx2::dot;
            max = avx2::max;
            relu = avx2::relu;
            backend = "avx2";
        }
#endif
    }
};

const Dispatch g_dispatch;

}  // namespace

AxpyFn axpy = g_dispatch.axpy;
MulFn mul = g_dispatch.mul;
ScaleFn scale = g_dispatch.scale;
SumFn sum = g_dispatch.sum;
DotFn dot = g_dispatch.dot;
MaxFn max = g_dispatch.max;
ReluFn relu = g_dispatch.relu;

const std::string& active_backend() { return g_dispatch.backend; }

}  // namespace drg::kernels
